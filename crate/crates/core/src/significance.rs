//! Statistical significance filtering of candidate biclusters.
//!
//! Approximation of the BSig false-positive control step, fully specified
//! here because the original method's internals live elsewhere:
//!
//! 1. Null model: discretize the observed data matrix into `L` equal-width
//!    levels spanning `[min(D), max(D)]` and record per-column level
//!    frequencies with add-one smoothing (`L` defaults to 10, matching the
//!    10-level grade preprocessing this pipeline targets).
//! 2. Per bicluster: take the modal level of each member column restricted
//!    to the member rows; `q = Π_j P[j][modal_j]` is the probability that a
//!    random row matches that column pattern under the null.
//! 3. p-value: `P(Binomial(n_rows, q) ≥ |rows|)`, an exact tail computed in
//!    log space.
//! 4. Bonferroni: reject unless `p ≤ global_alpha / n_tested`.
//!
//! A constant input matrix has no usable level structure; the fit degrades
//! to a flagged single-level model and every p-value becomes 1.

use thiserror::Error;

use crate::extract::{Bicluster, BiclusterSet, ExtractError};
use crate::matrix::DenseMatrix;
use crate::scalar::{compensated_sum, real, Real};

#[derive(Debug, Error)]
pub enum SignificanceError {
    #[error("n_levels must be at least 2, got {0}")]
    TooFewLevels(usize),
    #[error("global alpha must lie in (0, 1), got {0}")]
    BadAlpha(f64),
    #[error("bicluster addresses a {have:?} matrix but the model was fit on {want:?}")]
    ShapeMismatch {
        have: (usize, usize),
        want: (usize, usize),
    },
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

/// Discretized per-column null model of the observed data.
#[derive(Debug, Clone)]
pub struct NullModel<F> {
    boundaries: Vec<F>,
    col_probs: Vec<Vec<F>>,
    n_rows: usize,
    degenerate: bool,
}

impl<F: Real> NullModel<F> {
    pub fn n_levels(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// `L + 1` strictly increasing level boundaries.
    pub fn boundaries(&self) -> &[F] {
        &self.boundaries
    }

    /// Per-column level probabilities, each summing to 1.
    pub fn col_probs(&self) -> &[Vec<F>] {
        &self.col_probs
    }

    /// True when the input had zero value range; p-values are then 1.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Level index of a value: equal-width binning clamped to `[0, L)`.
    pub fn level_of(&self, value: F) -> usize {
        let lo = self.boundaries[0];
        let hi = *self.boundaries.last().unwrap();
        let levels = self.n_levels();
        if levels == 1 || value <= lo {
            return 0;
        }
        if value >= hi {
            return levels - 1;
        }
        let width = (hi - lo) / real::<F>(levels as f64);
        let idx = ((value - lo) / width).floor().to_usize().unwrap_or(0);
        idx.min(levels - 1)
    }
}

/// Fits the equal-width discretized null model with add-one smoothing.
pub fn fit_null<F: Real>(
    d: &DenseMatrix<F>,
    n_levels: usize,
) -> Result<NullModel<F>, SignificanceError> {
    if n_levels < 2 {
        return Err(SignificanceError::TooFewLevels(n_levels));
    }
    let (n, m) = d.shape();
    let lo = d.values().iter().copied().fold(F::infinity(), F::min);
    let hi = d.values().iter().copied().fold(F::neg_infinity(), F::max);

    if hi <= lo {
        // Constant matrix: single-level degenerate model.
        return Ok(NullModel {
            boundaries: vec![lo, lo + F::one()],
            col_probs: vec![vec![F::one()]; m],
            n_rows: n,
            degenerate: true,
        });
    }

    let levels_f = real::<F>(n_levels as f64);
    let width = (hi - lo) / levels_f;
    let boundaries: Vec<F> = (0..=n_levels)
        .map(|l| {
            if l == n_levels {
                hi
            } else {
                lo + width * real::<F>(l as f64)
            }
        })
        .collect();

    let model_probe = NullModel {
        boundaries: boundaries.clone(),
        col_probs: Vec::new(),
        n_rows: n,
        degenerate: false,
    };
    let mut col_probs = Vec::with_capacity(m);
    let denom = real::<F>((n + n_levels) as f64);
    for j in 0..m {
        let mut counts = vec![0usize; n_levels];
        for i in 0..n {
            counts[model_probe.level_of(d.get(i, j))] += 1;
        }
        col_probs.push(
            counts
                .iter()
                .map(|&c| real::<F>((c + 1) as f64) / denom)
                .collect(),
        );
    }

    Ok(NullModel {
        boundaries,
        col_probs,
        n_rows: n,
        degenerate: false,
    })
}

/// `P(Binomial(n, q) ≥ s)` via a numerically stable log-space tail sum.
pub fn binomial_tail<F: Real>(n: usize, s: usize, q: F) -> F {
    debug_assert!(q >= F::zero() && q <= F::one());
    if q <= F::zero() {
        return binomial_tail_ln(n, s, F::neg_infinity());
    }
    binomial_tail_ln(n, s, q.ln())
}

/// Tail with the match probability supplied in log space, which keeps tiny
/// column-pattern products out of the underflow range.
pub fn binomial_tail_ln<F: Real>(n: usize, s: usize, ln_q: F) -> F {
    if s == 0 {
        return F::one();
    }
    if s > n {
        return F::zero();
    }
    if ln_q == F::neg_infinity() {
        return F::zero(); // q = 0 and s ≥ 1
    }
    if ln_q >= F::zero() {
        return F::one(); // q = 1 and s ≤ n
    }

    // ln(1−q) via ln1p(−q); exp(ln_q) may underflow to 0, which is exact
    // enough there.
    let q = ln_q.exp();
    let ln_1mq = (-q).ln_1p();

    // ln C(n, s) = Σ_{i=1..s} ln((n-s+i)/i).
    let mut ln_coeff = F::zero();
    for i in 1..=s {
        ln_coeff += real::<F>((n - s + i) as f64).ln() - real::<F>(i as f64).ln();
    }

    // Walk k = s..n with ln t_{k+1} = ln t_k + ln((n−k)/(k+1)) + lnq − ln(1−q).
    let mut ln_terms = Vec::with_capacity(n - s + 1);
    let mut ln_t = ln_coeff + real::<F>(s as f64) * ln_q + real::<F>((n - s) as f64) * ln_1mq;
    ln_terms.push(ln_t);
    for k in s..n {
        ln_t += real::<F>((n - k) as f64).ln() - real::<F>((k + 1) as f64).ln() + ln_q - ln_1mq;
        ln_terms.push(ln_t);
    }

    // log-sum-exp.
    let max_ln = ln_terms
        .iter()
        .copied()
        .fold(F::neg_infinity(), F::max);
    if max_ln == F::neg_infinity() {
        return F::zero();
    }
    let sum = compensated_sum(ln_terms.iter().map(|&t| (t - max_ln).exp()));
    (max_ln + sum.ln()).exp().min(F::one()).max(F::zero())
}

/// Exact p-value of a bicluster under the null model: the probability that
/// at least `|rows|` of the matrix's rows match the bicluster's modal
/// column pattern by chance.
pub fn bicluster_pvalue<F: Real>(
    b: &Bicluster<F>,
    d: &DenseMatrix<F>,
    model: &NullModel<F>,
) -> Result<F, SignificanceError> {
    if d.n_rows() != model.n_rows || d.n_cols() != model.col_probs.len() {
        return Err(SignificanceError::ShapeMismatch {
            have: d.shape(),
            want: (model.n_rows, model.col_probs.len()),
        });
    }
    if model.is_degenerate() {
        return Ok(F::one());
    }

    let mut ln_q = F::zero();
    for &j in b.cols() {
        let mut counts = vec![0usize; model.n_levels()];
        for &i in b.rows() {
            counts[model.level_of(d.get(i, j))] += 1;
        }
        // Modal level; ties resolve to the lowest level index.
        let modal = counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(l, _)| l)
            .unwrap_or(0);
        ln_q += model.col_probs[j][modal].ln();
    }
    Ok(binomial_tail_ln(d.n_rows(), b.rows().len(), ln_q))
}

/// One scored bicluster within a [`SignificanceReport`].
#[derive(Debug, Clone)]
pub struct ScoredBicluster<F> {
    pub bicluster: Bicluster<F>,
    pub p_value: F,
    pub pass: bool,
}

/// Bonferroni-filtered significance report.
#[derive(Debug, Clone)]
pub struct SignificanceReport<F> {
    results: Vec<ScoredBicluster<F>>,
    n_tested: usize,
    global_alpha: F,
    corrected_threshold: Option<F>,
    degenerate_null: bool,
}

impl<F: Real> SignificanceReport<F> {
    pub fn results(&self) -> &[ScoredBicluster<F>] {
        &self.results
    }

    pub fn n_tested(&self) -> usize {
        self.n_tested
    }

    pub fn global_alpha(&self) -> F {
        self.global_alpha
    }

    /// `global_alpha / n_tested`; `None` when nothing was tested.
    pub fn corrected_threshold(&self) -> Option<F> {
        self.corrected_threshold
    }

    /// True when the null model was degenerate (constant input data).
    pub fn degenerate_null(&self) -> bool {
        self.degenerate_null
    }

    pub fn n_passing(&self) -> usize {
        self.results.iter().filter(|r| r.pass).count()
    }

    /// The surviving biclusters with their p-values attached.
    pub fn passing_set(&self, shape: (usize, usize)) -> Result<BiclusterSet<F>, SignificanceError> {
        let passing = self
            .results
            .iter()
            .filter(|r| r.pass)
            .map(|r| r.bicluster.clone().with_p_value(r.p_value))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BiclusterSet::new(shape, passing)?)
    }
}

/// Scores every candidate against the null model of `d` and applies the
/// Bonferroni threshold `global_alpha / n_tested`.
pub fn filter_biclusters<F: Real>(
    set: &BiclusterSet<F>,
    d: &DenseMatrix<F>,
    global_alpha: F,
    n_levels: usize,
) -> Result<SignificanceReport<F>, SignificanceError> {
    if !(global_alpha > F::zero() && global_alpha < F::one()) {
        return Err(SignificanceError::BadAlpha(
            global_alpha.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let n_tested = set.len();
    if n_tested == 0 {
        return Ok(SignificanceReport {
            results: Vec::new(),
            n_tested: 0,
            global_alpha,
            corrected_threshold: None,
            degenerate_null: false,
        });
    }

    let model = fit_null(d, n_levels)?;
    let threshold = global_alpha / real::<F>(n_tested as f64);
    let mut results = Vec::with_capacity(n_tested);
    for b in set.biclusters() {
        let p = bicluster_pvalue(b, d, &model)?;
        results.push(ScoredBicluster {
            bicluster: b.clone(),
            p_value: p,
            pass: p <= threshold,
        });
    }
    Ok(SignificanceReport {
        results,
        n_tested,
        global_alpha,
        corrected_threshold: Some(threshold),
        degenerate_null: model.is_degenerate(),
    })
}
