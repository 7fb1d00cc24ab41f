//! Bicluster extraction from the recovered low-rank matrix.
//!
//! Rows and columns are clustered independently with seeded k-means and the
//! cross-product blocks form checkerboard bicluster candidates. Blocks whose
//! mean absolute entry sits at the background level are dropped; everything
//! else is handed to the significance filter.
//!
//! K-means canonicalizes its input order internally (points are processed in
//! lexicographic order), so extraction commutes with row/column permutations
//! of the input matrix.

use thiserror::Error;

use crate::matrix::DenseMatrix;
use crate::recovery::estimate_sigma;
use crate::scalar::{real, Real};
use crate::seed::{fanout, fanout_indexed};
use crate::svd::{self, SvdError};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("bicluster index sets must be non-empty")]
    EmptyIndexSet,
    #[error("bicluster index {index} out of bounds for {axis} dimension {size}")]
    IndexOutOfBounds {
        axis: &'static str,
        index: usize,
        size: usize,
    },
    #[error("p-value {0} outside [0, 1]")]
    BadPValue(f64),
    #[error("k = {k} exceeds the number of points {n_points}")]
    KTooLarge { k: usize, n_points: usize },
    #[error("k must be at least 1")]
    KZero,
    #[error("embedding dimension {d} exceeds min(n_rows, n_cols) = {max_d}")]
    BadEmbeddingDim { d: usize, max_d: usize },
    #[error(transparent)]
    Svd(#[from] SvdError),
}

/// A submatrix given by a sorted set of row indices and column indices,
/// optionally annotated with a significance p-value.
#[derive(Debug, Clone, PartialEq)]
pub struct Bicluster<F> {
    rows: Vec<usize>,
    cols: Vec<usize>,
    p_value: Option<F>,
}

impl<F: Real> Bicluster<F> {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Result<Self, ExtractError> {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        if rows.is_empty() || cols.is_empty() {
            return Err(ExtractError::EmptyIndexSet);
        }
        Ok(Self {
            rows,
            cols,
            p_value: None,
        })
    }

    pub fn with_p_value(mut self, p: F) -> Result<Self, ExtractError> {
        if !(p >= F::zero() && p <= F::one()) {
            return Err(ExtractError::BadPValue(p.to_f64().unwrap_or(f64::NAN)));
        }
        self.p_value = Some(p);
        Ok(self)
    }

    /// Sorted ascending, no duplicates.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn p_value(&self) -> Option<F> {
        self.p_value
    }

    pub fn n_cells(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn contains_cell(&self, row: usize, col: usize) -> bool {
        self.rows.binary_search(&row).is_ok() && self.cols.binary_search(&col).is_ok()
    }
}

/// A collection of biclusters over a fixed matrix shape.
#[derive(Debug, Clone, PartialEq)]
pub struct BiclusterSet<F> {
    biclusters: Vec<Bicluster<F>>,
    source_shape: (usize, usize),
}

impl<F: Real> BiclusterSet<F> {
    pub fn new(
        source_shape: (usize, usize),
        biclusters: Vec<Bicluster<F>>,
    ) -> Result<Self, ExtractError> {
        for b in &biclusters {
            if let Some(&bad) = b.rows.iter().find(|&&r| r >= source_shape.0) {
                return Err(ExtractError::IndexOutOfBounds {
                    axis: "row",
                    index: bad,
                    size: source_shape.0,
                });
            }
            if let Some(&bad) = b.cols.iter().find(|&&c| c >= source_shape.1) {
                return Err(ExtractError::IndexOutOfBounds {
                    axis: "column",
                    index: bad,
                    size: source_shape.1,
                });
            }
        }
        Ok(Self {
            biclusters,
            source_shape,
        })
    }

    pub fn empty(source_shape: (usize, usize)) -> Self {
        Self {
            biclusters: Vec::new(),
            source_shape,
        }
    }

    pub fn biclusters(&self) -> &[Bicluster<F>] {
        &self.biclusters
    }

    pub fn source_shape(&self) -> (usize, usize) {
        self.source_shape
    }

    pub fn len(&self) -> usize {
        self.biclusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.biclusters.is_empty()
    }
}

/// Lloyd's k-means with k-means++ seeding, 10 restarts picked by
/// within-cluster sum of squares, 300-iteration cap, empty clusters
/// re-seeded from the farthest point. Deterministic given `seed` and
/// invariant to the order of `points`.
pub fn kmeans<F: Real>(
    points: &[Vec<F>],
    k: usize,
    seed: u64,
) -> Result<Vec<usize>, ExtractError> {
    const RESTARTS: usize = 10;
    const MAX_ITERS: usize = 300;

    if k == 0 {
        return Err(ExtractError::KZero);
    }
    if k > points.len() {
        return Err(ExtractError::KTooLarge {
            k,
            n_points: points.len(),
        });
    }

    // Canonical processing order: permutation of the input must not change
    // the result.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .partial_cmp(&points[b])
            .expect("finite coordinates are totally ordered")
    });
    let sorted: Vec<&[F]> = order.iter().map(|&i| points[i].as_slice()).collect();

    let mut best: Option<(F, Vec<usize>)> = None;
    for restart in 0..RESTARTS {
        let rng_seed = fanout_indexed(seed, "kmeans-restart", restart as u64);
        let (assignment, wcss) = lloyd(&sorted, k, rng_seed, MAX_ITERS);
        let better = match &best {
            None => true,
            Some((best_wcss, _)) => wcss < *best_wcss,
        };
        if better {
            best = Some((wcss, assignment));
        }
    }
    let (_, sorted_assignment) = best.expect("at least one restart ran");

    let mut assignment = vec![0usize; points.len()];
    for (pos, &orig) in order.iter().enumerate() {
        assignment[orig] = sorted_assignment[pos];
    }
    Ok(assignment)
}

fn squared_distance<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .fold(F::zero(), |acc, d| acc + d)
}

fn lloyd<F: Real>(points: &[&[F]], k: usize, rng_seed: u64, max_iters: usize) -> (Vec<usize>, F) {
    let n = points.len();
    let dim = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);

    // k-means++ seeding.
    let mut centroids: Vec<Vec<F>> = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..n)].to_vec());
    let mut dist_sq: Vec<F> = points
        .iter()
        .map(|p| squared_distance(p, &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: F = dist_sq.iter().copied().fold(F::zero(), |a, b| a + b);
        let next = if total > F::zero() {
            let mut target = real::<F>(rng.random::<f64>()) * total;
            let mut chosen = n - 1;
            for (i, &d) in dist_sq.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centroids.push(points[next].to_vec());
        for (i, p) in points.iter().enumerate() {
            let d = squared_distance(p, centroids.last().unwrap());
            if d < dist_sq[i] {
                dist_sq[i] = d;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for _ in 0..max_iters {
        // Assign to the nearest centroid; ties go to the lowest index.
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best_c = 0usize;
            let mut best_d = squared_distance(p, &centroids[0]);
            for (c, centroid) in centroids.iter().enumerate().skip(1) {
                let d = squared_distance(p, centroid);
                if d < best_d {
                    best_d = d;
                    best_c = c;
                }
            }
            if assignment[i] != best_c {
                assignment[i] = best_c;
                changed = true;
            }
        }

        // Recompute centroids.
        let mut sums = vec![vec![F::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for (i, p) in points.iter().enumerate() {
            counts[assignment[i]] += 1;
            for (s, &x) in sums[assignment[i]].iter_mut().zip(p.iter()) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // Re-seed from the point farthest from its centroid.
                let far = (0..n)
                    .max_by(|&a, &b| {
                        let da = squared_distance(points[a], &centroids[assignment[a]]);
                        let db = squared_distance(points[b], &centroids[assignment[b]]);
                        da.partial_cmp(&db).unwrap()
                    })
                    .expect("non-empty point set");
                centroids[c] = points[far].to_vec();
                changed = true;
            } else {
                let count = real::<F>(counts[c] as f64);
                for (j, s) in sums[c].iter().enumerate() {
                    centroids[c][j] = *s / count;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let wcss = points
        .iter()
        .enumerate()
        .map(|(i, p)| squared_distance(p, &centroids[assignment[i]]))
        .fold(F::zero(), |a, b| a + b);
    (assignment, wcss)
}

/// Checkerboard bicluster extraction: cluster rows into `k_rows` groups and
/// columns into `k_cols` groups, emit every non-empty cross-product block,
/// then drop flat blocks whose mean absolute entry is at or below
/// `flat_threshold` (default `0.5·σ̂(X)`).
pub fn extract_biclusters<F: Real>(
    x: &DenseMatrix<F>,
    k_rows: usize,
    k_cols: usize,
    seed: u64,
    flat_threshold: Option<F>,
) -> Result<BiclusterSet<F>, ExtractError> {
    let (n, m) = x.shape();
    let row_points: Vec<Vec<F>> = (0..n).map(|i| x.row(i).to_vec()).collect();
    let col_points: Vec<Vec<F>> = (0..m).map(|j| x.col(j)).collect();

    let row_assign = kmeans(&row_points, k_rows, fanout(seed, "rows"))?;
    let col_assign = kmeans(&col_points, k_cols, fanout(seed, "cols"))?;

    let threshold = flat_threshold.unwrap_or_else(|| real::<F>(0.5) * estimate_sigma(x));

    let mut biclusters = Vec::new();
    for r in 0..k_rows {
        let rows: Vec<usize> = (0..n).filter(|&i| row_assign[i] == r).collect();
        if rows.is_empty() {
            continue;
        }
        for c in 0..k_cols {
            let cols: Vec<usize> = (0..m).filter(|&j| col_assign[j] == c).collect();
            if cols.is_empty() {
                continue;
            }
            let mut sum_abs = F::zero();
            for &i in &rows {
                for &j in &cols {
                    sum_abs += x.get(i, j).abs();
                }
            }
            let mean_abs = sum_abs / real::<F>((rows.len() * cols.len()) as f64);
            if mean_abs <= threshold {
                continue;
            }
            biclusters.push(Bicluster::new(rows.clone(), cols)?);
        }
    }
    BiclusterSet::new((n, m), biclusters)
}

/// Latent features per knowledge topic from the first `d` right singular
/// vectors, scaled by their singular values: embedding of column `j` is
/// `(σ₁V_{j1}, …, σ_d V_{jd})`.
pub fn topic_embedding<F: Real>(
    x: &DenseMatrix<F>,
    d: usize,
) -> Result<Vec<Vec<F>>, ExtractError> {
    let max_d = x.n_rows().min(x.n_cols());
    if d == 0 || d > max_d {
        return Err(ExtractError::BadEmbeddingDim { d, max_d });
    }
    let factors = svd::svd(x)?;
    let v = factors.right_vectors();
    let s = factors.singular_values();
    Ok((0..x.n_cols())
        .map(|j| (0..d).map(|t| s[t] * v.get(j, t)).collect())
        .collect())
}

/// Mean silhouette score of k-means assignments for each `k` in
/// `k_range`, with the best `k` (ties to the smallest). Offered because no
/// single k suits every dataset.
pub fn silhouette_sweep<F: Real>(
    points: &[Vec<F>],
    k_range: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Result<(usize, Vec<(usize, F)>), ExtractError> {
    let mut scores = Vec::new();
    let mut best: Option<(usize, F)> = None;
    for k in k_range {
        if k < 2 || k >= points.len() {
            continue;
        }
        let assignment = kmeans(points, k, seed)?;
        let score = mean_silhouette(points, &assignment, k);
        scores.push((k, score));
        let better = match best {
            None => true,
            Some((_, best_score)) => score > best_score,
        };
        if better {
            best = Some((k, score));
        }
    }
    match best {
        Some((k, _)) => Ok((k, scores)),
        None => Err(ExtractError::KTooLarge {
            k: 2,
            n_points: points.len(),
        }),
    }
}

fn mean_silhouette<F: Real>(points: &[Vec<F>], assignment: &[usize], k: usize) -> F {
    let n = points.len();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &c) in assignment.iter().enumerate() {
        members[c].push(i);
    }

    let mut total = F::zero();
    for i in 0..n {
        let own = assignment[i];
        if members[own].len() <= 1 {
            continue; // singleton contributes 0
        }
        let mut a = F::zero();
        for &j in &members[own] {
            if j != i {
                a += squared_distance(&points[i], &points[j]).sqrt();
            }
        }
        a /= real::<F>((members[own].len() - 1) as f64);

        let mut b = F::infinity();
        for (c, group) in members.iter().enumerate() {
            if c == own || group.is_empty() {
                continue;
            }
            let mut mean = F::zero();
            for &j in group {
                mean += squared_distance(&points[i], &points[j]).sqrt();
            }
            mean /= real::<F>(group.len() as f64);
            if mean < b {
                b = mean;
            }
        }
        if b.is_finite() {
            let denom = a.max(b);
            if denom > F::zero() {
                total += (b - a) / denom;
            }
        }
    }
    total / real::<F>(n as f64)
}
