//! Deterministic JSON serialization for every artifact the pipeline writes.
//!
//! Field order is fixed by the DTO struct definitions and floats print with
//! exactly 12 significant digits (scientific notation), so a rerun with the
//! same inputs produces byte-identical files.

use std::io;

use serde::{Deserialize, Serialize};

use crate::extract::{Bicluster, BiclusterSet, ExtractError};
use crate::matrix::BoolMatrix;
use crate::metrics::{MetricReport, SparsePRF};
use crate::significance::SignificanceReport;
use crate::synth::GroundTruth;

/// 12-significant-digit rendering; zero collapses to `0.0` so that `-0.0`
/// cannot leak run-to-run differences.
pub fn format_float(x: f64) -> io::Result<String> {
    if !x.is_finite() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("cannot serialize non-finite float {x}"),
        ));
    }
    if x == 0.0 {
        return Ok("0.0".to_string());
    }
    Ok(format!("{x:.11e}"))
}

struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(format_float(value)?.as_bytes())
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(format_float(f64::from(value))?.as_bytes())
    }
}

/// Serializes with fixed field order and pinned float formatting; ends with
/// a newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn from_json_str<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T, serde_json::Error> {
    serde_json::from_str(s)
}

// ---- ground truth: {biclusters:[{rows,cols}], spikes:[[i,j],...]} ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruthBiclusterJson {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruthJson {
    pub biclusters: Vec<TruthBiclusterJson>,
    pub spikes: Vec<(usize, usize)>,
}

impl GroundTruthJson {
    pub fn from_truth(truth: &GroundTruth) -> Self {
        Self {
            biclusters: truth
                .biclusters()
                .iter()
                .map(|(rows, cols)| TruthBiclusterJson {
                    rows: rows.clone(),
                    cols: cols.clone(),
                })
                .collect(),
            spikes: truth.spike_mask().true_indices(),
        }
    }

    /// Rebuilds the ground truth for a matrix of the given shape; the JSON
    /// format itself does not carry dimensions.
    pub fn to_truth(&self, shape: (usize, usize)) -> GroundTruth {
        let mut mask = BoolMatrix::new(shape.0, shape.1);
        for &(i, j) in &self.spikes {
            mask.set(i, j, true);
        }
        GroundTruth::new(
            self.biclusters
                .iter()
                .map(|b| (b.rows.clone(), b.cols.clone()))
                .collect(),
            mask,
        )
    }
}

// ---- bicluster sets: {shape:[n,m], biclusters:[{rows,cols,p_value}]} ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiclusterJson {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiclusterSetJson {
    pub shape: (usize, usize),
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_cols: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub biclusters: Vec<BiclusterJson>,
}

impl BiclusterSetJson {
    pub fn from_set(set: &BiclusterSet<f64>) -> Self {
        Self {
            shape: set.source_shape(),
            k_rows: None,
            k_cols: None,
            seed: None,
            biclusters: set
                .biclusters()
                .iter()
                .map(|b| BiclusterJson {
                    rows: b.rows().to_vec(),
                    cols: b.cols().to_vec(),
                    p_value: b.p_value(),
                })
                .collect(),
        }
    }

    pub fn to_set(&self) -> Result<BiclusterSet<f64>, ExtractError> {
        let biclusters = self
            .biclusters
            .iter()
            .map(|b| {
                let bc = Bicluster::new(b.rows.clone(), b.cols.clone())?;
                match b.p_value {
                    Some(p) => bc.with_p_value(p),
                    None => Ok(bc),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        BiclusterSet::new(self.shape, biclusters)
    }
}

// ---- significance: {alpha, n_tested, results:[{rows,cols,p_value,pass}]} ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignificanceEntryJson {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub p_value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignificanceReportJson {
    pub alpha: f64,
    pub n_tested: usize,
    pub results: Vec<SignificanceEntryJson>,
}

impl SignificanceReportJson {
    pub fn from_report(report: &SignificanceReport<f64>) -> Self {
        Self {
            alpha: report.global_alpha(),
            n_tested: report.n_tested(),
            results: report
                .results()
                .iter()
                .map(|r| SignificanceEntryJson {
                    rows: r.bicluster.rows().to_vec(),
                    cols: r.bicluster.cols().to_vec(),
                    p_value: r.p_value,
                    pass: r.pass,
                })
                .collect(),
        }
    }
}

// ---- metrics: the six scores plus optional sparse PRF ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparsePrfJson {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

impl SparsePrfJson {
    pub fn from_prf(prf: &SparsePRF<f64>) -> Self {
        Self {
            precision: prf.precision,
            recall: prf.recall,
            f1: prf.f1,
            true_positives: prf.true_positives,
            false_positives: prf.false_positives,
            false_negatives: prf.false_negatives,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricReportJson {
    pub liu_wang: f64,
    pub prelic_recovery: f64,
    pub prelic_relevance: f64,
    pub csi: f64,
    pub clustering_error_similarity: f64,
    pub fabia_consensus: f64,
    pub sparse: Option<SparsePrfJson>,
}

impl MetricReportJson {
    pub fn from_report(report: &MetricReport<f64>, sparse: Option<&SparsePRF<f64>>) -> Self {
        Self {
            liu_wang: report.liu_wang,
            prelic_recovery: report.prelic_recovery,
            prelic_relevance: report.prelic_relevance,
            csi: report.csi,
            clustering_error_similarity: report.clustering_error_similarity,
            fabia_consensus: report.fabia_consensus,
            sparse: sparse.map(SparsePrfJson::from_prf),
        }
    }
}
