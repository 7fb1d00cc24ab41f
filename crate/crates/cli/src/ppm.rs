//! Binary PPM (P6) rendering with a fixed colormap, so image bytes are
//! reproducible without any image dependency.
//!
//! Colormap: values are min-max normalized to t ∈ [0, 1] and mapped through
//! a two-segment linear gradient, navy (8, 29, 88) → near-white
//! (247, 247, 247) → dark red (165, 0, 38), channels rounded to nearest.
//! A constant matrix renders entirely at the midpoint color.

use std::io::Write;

use anyhow::Result;

use biclust_core::Matrix;

const LOW: [f64; 3] = [8.0, 29.0, 88.0];
const MID: [f64; 3] = [247.0, 247.0, 247.0];
const HIGH: [f64; 3] = [165.0, 0.0, 38.0];

pub fn color_of(t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0);
    let (from, to, s) = if t < 0.5 {
        (LOW, MID, t * 2.0)
    } else {
        (MID, HIGH, (t - 0.5) * 2.0)
    };
    let mut out = [0u8; 3];
    for c in 0..3 {
        out[c] = (from[c] + (to[c] - from[c]) * s).round() as u8;
    }
    out
}

/// Heatmap with `scale × scale` pixels per matrix cell.
pub fn write_heatmap<W: Write>(mut writer: W, m: &Matrix, scale: usize) -> Result<()> {
    let scale = scale.max(1);
    let (n, cols) = m.shape();
    let lo = m.values().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = m.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;

    let width = cols * scale;
    let height = n * scale;
    write!(writer, "P6\n{width} {height}\n255\n")?;
    let mut row_buf = Vec::with_capacity(width * 3);
    for i in 0..n {
        row_buf.clear();
        for j in 0..cols {
            let t = if range > 0.0 {
                (m.get(i, j) - lo) / range
            } else {
                0.5
            };
            let rgb = color_of(t);
            for _ in 0..scale {
                row_buf.extend_from_slice(&rgb);
            }
        }
        for _ in 0..scale {
            writer.write_all(&row_buf)?;
        }
    }
    Ok(())
}

/// Scatter plot of 2-d points on a white canvas with 3×3 black markers.
pub fn write_scatter<W: Write>(
    mut writer: W,
    points: &[(f64, f64)],
    size: usize,
) -> Result<()> {
    let size = size.max(16);
    let mut canvas = vec![255u8; size * size * 3];

    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    let margin = 8usize;
    let span = (size - 2 * margin - 1) as f64;
    let project = |v: f64, lo: f64, hi: f64| -> usize {
        let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        margin + (t * span).round() as usize
    };

    for &(x, y) in points {
        let px = project(x, x_lo, x_hi);
        // Larger values upward.
        let py = size - 1 - project(y, y_lo, y_hi);
        for di in -1i64..=1 {
            for dj in -1i64..=1 {
                let r = py as i64 + di;
                let c = px as i64 + dj;
                if r >= 0 && c >= 0 && (r as usize) < size && (c as usize) < size {
                    let base = (r as usize * size + c as usize) * 3;
                    canvas[base..base + 3].copy_from_slice(&[0, 0, 0]);
                }
            }
        }
    }

    write!(writer, "P6\n{size} {size}\n255\n")?;
    writer.write_all(&canvas)?;
    Ok(())
}
