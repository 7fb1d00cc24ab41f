//! Score-matrix preprocessing: invert performance scores so larger means
//! weaker, and bin values into the 10 grade levels used downstream.

use anyhow::{bail, Result};

use biclust_core::Matrix;

const BIN_LEVELS: usize = 10;
const MAX_LISTED: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `100 − score`; scores must lie in [0, 100].
    Invert,
    /// `1 − value`; for mastery probabilities in [0, 1].
    InvertUnit,
    /// 10 equal-width levels 0..9 over the observed value range, level 0
    /// holding the smallest values ("excelling" after inversion).
    Bin,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "invert" => Ok(Self::Invert),
            "invert-unit" | "invert_unit" => Ok(Self::InvertUnit),
            "bin" => Ok(Self::Bin),
            other => Err(format!(
                "unknown mode '{other}' (expected invert|invert-unit|bin)"
            )),
        }
    }
}

fn check_range(m: &Matrix, lo: f64, hi: f64) -> Result<()> {
    let mut bad: Vec<String> = Vec::new();
    let mut extra = 0usize;
    for i in 0..m.n_rows() {
        for j in 0..m.n_cols() {
            let v = m.get(i, j);
            if !(lo..=hi).contains(&v) {
                if bad.len() < MAX_LISTED {
                    bad.push(format!("({i}, {j}) = {v}"));
                } else {
                    extra += 1;
                }
            }
        }
    }
    if !bad.is_empty() {
        let mut msg = format!(
            "{} value(s) outside [{lo}, {hi}]: {}",
            bad.len() + extra,
            bad.join(", ")
        );
        if extra > 0 {
            msg.push_str(&format!(" and {extra} more"));
        }
        bail!(msg);
    }
    Ok(())
}

pub fn apply(m: &Matrix, mode: Mode) -> Result<Matrix> {
    match mode {
        Mode::Invert => {
            check_range(m, 0.0, 100.0)?;
            Ok(m.map(|v| 100.0 - v)?)
        }
        Mode::InvertUnit => {
            check_range(m, 0.0, 1.0)?;
            Ok(m.map(|v| 1.0 - v)?)
        }
        Mode::Bin => {
            let lo = m.values().iter().copied().fold(f64::INFINITY, f64::min);
            let hi = m.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi <= lo {
                return Ok(m.map(|_| 0.0)?);
            }
            let width = (hi - lo) / BIN_LEVELS as f64;
            Ok(m.map(|v| {
                let level = ((v - lo) / width).floor() as usize;
                level.min(BIN_LEVELS - 1) as f64
            })?)
        }
    }
}

pub fn apply_all(m: &Matrix, modes: &[Mode]) -> Result<Matrix> {
    let mut out = m.clone();
    for &mode in modes {
        out = apply(&out, mode)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<f64>>) -> Matrix {
        biclust_core::DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn invert_then_bin_grade_anchors() {
        // A full-range score matrix: 100 inverts to 0 and lands in level 0,
        // 0 inverts to 100 and lands in level 9.
        let scores = m(vec![vec![100.0, 0.0, 50.0, 85.0]]);
        let out = apply_all(&scores, &[Mode::Invert, Mode::Bin]).unwrap();
        assert_eq!(out.get(0, 0), 0.0);
        assert_eq!(out.get(0, 1), 9.0);
        assert_eq!(out.get(0, 2), 5.0);
        assert_eq!(out.get(0, 3), 1.0);
    }

    #[test]
    fn constant_scores_collapse_to_one_level() {
        let flat = m(vec![vec![73.0, 73.0], vec![73.0, 73.0]]);
        let out = apply(&flat, Mode::Bin).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn invert_rejects_out_of_range_with_positions() {
        let bad = m(vec![vec![50.0, 101.0], vec![-3.0, 70.0]]);
        let err = apply(&bad, Mode::Invert).unwrap_err().to_string();
        assert!(err.contains("(0, 1) = 101"), "{err}");
        assert!(err.contains("(1, 0) = -3"), "{err}");
    }

    #[test]
    fn invert_unit_for_mastery_values() {
        let p = m(vec![vec![0.0, 0.25, 1.0]]);
        let out = apply(&p, Mode::InvertUnit).unwrap();
        assert_eq!(out.values(), &[1.0, 0.75, 0.0]);
    }
}
