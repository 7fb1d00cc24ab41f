//! Convex low-rank + sparse decomposition.
//!
//! Solves `min ½‖D − X − E‖²_F + α‖X‖_* + β‖E‖₁` by alternating the two
//! closed-form proximal sub-steps: singular value thresholding for the
//! low-rank block and elementwise soft-thresholding for the sparse block.
//! The non-convex rank/ℓ0 program this relaxes is documented but never
//! solved directly.
//!
//! Parameter heuristics: `σ̂ = 1.48·median|D − median(D)|`,
//! `α = (√n + √m)·σ`, `β = λ·α` with `λ = 1/√m` by default.

use thiserror::Error;

use crate::matrix::{DenseMatrix, MatrixError};
use crate::scalar::{real, Real};
use crate::svd::{self, SvdError};

#[derive(Debug, Error)]
pub enum RecoveryError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Shape(#[from] MatrixError),
    #[error("SVD failed at iteration {iteration}: {source}")]
    SvdAt {
        iteration: usize,
        source: SvdError,
    },
    #[error("objective became non-finite at iteration {iteration}; check alpha/beta scaling")]
    NonFiniteObjective { iteration: usize },
}

/// Solver configuration. `alpha` weights the nuclear norm, `beta` the ℓ1
/// norm; both must be strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryParams<F> {
    alpha: F,
    beta: F,
    tol: F,
    max_iters: usize,
}

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERS: usize = 500;

impl<F: Real> RecoveryParams<F> {
    pub fn new(alpha: F, beta: F, tol: F, max_iters: usize) -> Result<Self, RecoveryError> {
        if !(alpha > F::zero() && alpha.is_finite()) {
            return Err(RecoveryError::InvalidParams(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if !(beta > F::zero() && beta.is_finite()) {
            return Err(RecoveryError::InvalidParams(format!(
                "beta must be positive, got {beta}"
            )));
        }
        if !(tol > F::zero() && tol.is_finite()) {
            return Err(RecoveryError::InvalidParams(format!(
                "tol must be positive, got {tol}"
            )));
        }
        if max_iters == 0 {
            return Err(RecoveryError::InvalidParams(
                "max_iters must be at least 1".into(),
            ));
        }
        Ok(Self {
            alpha,
            beta,
            tol,
            max_iters,
        })
    }

    /// Heuristic parameters for an `n_rows × n_cols` matrix with noise scale
    /// `sigma`: `α = (√n + √m)·σ`, `β = α/√m`, default tolerance and
    /// iteration cap.
    pub fn from_noise_scale(
        n_rows: usize,
        n_cols: usize,
        sigma: F,
    ) -> Result<Self, RecoveryError> {
        let alpha = default_alpha(n_rows, n_cols, sigma);
        let beta = default_lambda::<F>(n_cols) * alpha;
        Self::new(alpha, beta, real(DEFAULT_TOL), DEFAULT_MAX_ITERS)
    }

    /// Replaces `β` with `lambda · α`.
    pub fn with_lambda(self, lambda: F) -> Result<Self, RecoveryError> {
        Self::new(self.alpha, lambda * self.alpha, self.tol, self.max_iters)
    }

    pub fn with_alpha(self, alpha: F) -> Result<Self, RecoveryError> {
        Self::new(alpha, self.beta, self.tol, self.max_iters)
    }

    pub fn with_tol(self, tol: F) -> Result<Self, RecoveryError> {
        Self::new(self.alpha, self.beta, tol, self.max_iters)
    }

    pub fn with_max_iters(self, max_iters: usize) -> Result<Self, RecoveryError> {
        Self::new(self.alpha, self.beta, self.tol, max_iters)
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    pub fn beta(&self) -> F {
        self.beta
    }

    pub fn tol(&self) -> F {
        self.tol
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }
}

/// Solver output. `low_rank + sparse + residual` reconstructs the input.
#[derive(Debug, Clone)]
pub struct RecoveryResult<F> {
    low_rank: DenseMatrix<F>,
    sparse: DenseMatrix<F>,
    residual: DenseMatrix<F>,
    objective_trace: Vec<F>,
    iterations: usize,
    converged: bool,
}

impl<F: Real> RecoveryResult<F> {
    /// The recovered low-rank component X̂.
    pub fn low_rank(&self) -> &DenseMatrix<F> {
        &self.low_rank
    }

    /// The recovered sparse component Ê.
    pub fn sparse(&self) -> &DenseMatrix<F> {
        &self.sparse
    }

    /// `D − X̂ − Ê`, the noise estimate.
    pub fn residual(&self) -> &DenseMatrix<F> {
        &self.residual
    }

    /// Objective value after each full alternation.
    pub fn objective_trace(&self) -> &[F] {
        &self.objective_trace
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn final_objective(&self) -> F {
        *self
            .objective_trace
            .last()
            .expect("solver always records at least one iteration")
    }
}

/// Robust noise-scale estimate: `1.48 · median{|D − median(D)|}` over all
/// entries. The median of an even count is the mean of the two middle
/// values.
pub fn estimate_sigma<F: Real>(d: &DenseMatrix<F>) -> F {
    let med = median_of(d.values().to_vec());
    let deviations: Vec<F> = d.values().iter().map(|&v| (v - med).abs()).collect();
    real::<F>(1.48) * median_of(deviations)
}

fn median_of<F: Real>(mut buf: Vec<F>) -> F {
    assert!(!buf.is_empty());
    buf.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite values are totally ordered"));
    let n = buf.len();
    if n % 2 == 1 {
        buf[n / 2]
    } else {
        (buf[n / 2 - 1] + buf[n / 2]) / (F::one() + F::one())
    }
}

/// `(√n_rows + √n_cols) · sigma`, the expected spectral norm of an
/// `n_rows × n_cols` noise matrix with i.i.d. `N(0, σ²)` entries.
pub fn default_alpha<F: Real>(n_rows: usize, n_cols: usize, sigma: F) -> F {
    assert!(n_rows >= 1 && n_cols >= 1);
    (real::<F>(n_rows as f64).sqrt() + real::<F>(n_cols as f64).sqrt()) * sigma
}

/// `1/√n_cols`, the default relative weight `λ = β/α`.
pub fn default_lambda<F: Real>(n_cols: usize) -> F {
    assert!(n_cols >= 1);
    F::one() / real::<F>(n_cols as f64).sqrt()
}

/// Singular value thresholding: `Σ (σᵢ − τ)₊ uᵢvᵢᵀ`, the proximal operator
/// of `τ‖·‖_*`.
pub fn svt<F: Real>(m: &DenseMatrix<F>, tau: F) -> Result<DenseMatrix<F>, SvdError> {
    assert!(tau >= F::zero(), "svt threshold must be non-negative");
    let factors = svd::svd(m)?;
    let shrunk: Vec<F> = factors
        .singular_values()
        .iter()
        .map(|&s| (s - tau).max(F::zero()))
        .collect();
    Ok(factors.reconstruct_with_values(&shrunk))
}

/// Elementwise soft thresholding: `sign(Mᵢⱼ)·(|Mᵢⱼ| − β)₊`, the proximal
/// operator of `β‖·‖₁`.
pub fn soft_threshold<F: Real>(m: &DenseMatrix<F>, beta: F) -> DenseMatrix<F> {
    assert!(beta >= F::zero(), "soft threshold must be non-negative");
    m.map(|v| {
        let shrunk = (v.abs() - beta).max(F::zero());
        if v < F::zero() {
            -shrunk
        } else {
            shrunk
        }
    })
    .expect("shrinkage of finite values is finite")
}

/// `½‖D−X−E‖²_F + α‖X‖_* + β‖E‖₁`.
pub fn objective<F: Real>(
    d: &DenseMatrix<F>,
    x: &DenseMatrix<F>,
    e: &DenseMatrix<F>,
    alpha: F,
    beta: F,
) -> Result<F, RecoveryError> {
    d.check_same_shape(x)?;
    d.check_same_shape(e)?;
    let residual = d.sub(x)?.sub(e)?;
    let fit = residual.frobenius_norm();
    let half = F::one() / (F::one() + F::one());
    let nuclear = x.nuclear_norm().map_err(|source| RecoveryError::SvdAt {
        iteration: 0,
        source,
    })?;
    Ok(half * fit * fit + alpha * nuclear + beta * e.l1_norm())
}

/// Alternating solver starting from `Ê = 0`.
pub fn recover<F: Real>(
    d: &DenseMatrix<F>,
    params: &RecoveryParams<F>,
) -> Result<RecoveryResult<F>, RecoveryError> {
    let zero = DenseMatrix::zeros(d.n_rows(), d.n_cols());
    recover_from(d, params, &zero)
}

/// Alternating solver with an explicit warm start for Ê. The objective is
/// convex, so any start reaches the same optimum up to tolerance.
pub fn recover_from<F: Real>(
    d: &DenseMatrix<F>,
    params: &RecoveryParams<F>,
    e_init: &DenseMatrix<F>,
) -> Result<RecoveryResult<F>, RecoveryError> {
    recover_observed(d, params, e_init, |_, _| {})
}

/// [`recover_from`] with a per-iteration observer `(iteration, objective)`,
/// invoked from the solver's own thread.
pub fn recover_observed<F: Real>(
    d: &DenseMatrix<F>,
    params: &RecoveryParams<F>,
    e_init: &DenseMatrix<F>,
    mut observer: impl FnMut(usize, F),
) -> Result<RecoveryResult<F>, RecoveryError> {
    d.check_same_shape(e_init)?;
    let mut x = DenseMatrix::zeros(d.n_rows(), d.n_cols());
    let mut e = e_init.clone();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=params.max_iters {
        iterations = iter;
        let x_next = svt(&d.sub(&e)?, params.alpha).map_err(|source| RecoveryError::SvdAt {
            iteration: iter,
            source,
        })?;
        let e_next = soft_threshold(&d.sub(&x_next)?, params.beta);

        let obj = objective(d, &x_next, &e_next, params.alpha, params.beta)?;
        if !obj.is_finite() {
            return Err(RecoveryError::NonFiniteObjective { iteration: iter });
        }
        observer(iter, obj);
        trace.push(obj);

        let rel_x = x_next.rel_frobenius_distance(&x)?;
        let rel_e = e_next.rel_frobenius_distance(&e)?;
        x = x_next;
        e = e_next;
        if rel_x.max(rel_e) < params.tol {
            converged = true;
            break;
        }
    }

    let residual = d.sub(&x.add(&e)?)?;
    Ok(RecoveryResult {
        low_rank: x,
        sparse: e,
        residual,
        objective_trace: trace,
        iterations,
        converged,
    })
}
