//! Recovery of a low-rank "group characteristics" matrix and a sparse
//! "individual characteristics" matrix from a noisy students × topics
//! mastery matrix, followed by bicluster extraction, statistical
//! significance filtering and evaluation against ground truth.
//!
//! The pipeline has two stages: a convex low-rank + sparse decomposition
//! solved by alternating closed-form proximal steps ([`recovery`]), and a
//! statistical evaluation stage that clusters the low-rank part into
//! checkerboard biclusters ([`extract`]) and rejects the insignificant
//! ones under a binomial null model with Bonferroni correction
//! ([`significance`]). [`synth`] generates the benchmark datasets and
//! [`metrics`] scores results against planted ground truth.
//!
//! All numeric code is generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); the crate-root aliases fix `f64`, which is what the
//! CLI uses throughout.

pub mod assignment;
pub mod csvio;
pub mod extract;
pub mod jsonio;
pub mod matrix;
pub mod metrics;
pub mod recovery;
pub mod scalar;
pub mod seed;
pub mod significance;
pub mod svd;
pub mod synth;

pub use matrix::{BoolMatrix, DenseMatrix};
pub use scalar::Real;

/// Double-precision matrix, the default for every CLI entry point.
pub type Matrix = DenseMatrix<f64>;
/// Single-precision matrix.
pub type Matrix32 = DenseMatrix<f32>;
/// Double-precision bicluster.
pub type Bicluster = extract::Bicluster<f64>;
/// Double-precision bicluster collection.
pub type BiclusterSet = extract::BiclusterSet<f64>;
/// Double-precision solver configuration.
pub type RecoveryParams = recovery::RecoveryParams<f64>;
/// Double-precision solver output.
pub type RecoveryResult = recovery::RecoveryResult<f64>;
