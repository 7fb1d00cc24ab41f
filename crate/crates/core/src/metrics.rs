//! External evaluation metrics for bicluster collections, plus
//! precision/recall/F1 for sparse-spike recovery.
//!
//! The four cited match scores follow their original definitions and every
//! one is pinned by an independent brute-force oracle in the test suite:
//!
//! - Liu–Wang match score: mean over reference biclusters of the best
//!   combined row+column overlap `(|I∩| + |J∩|)/(|I∪| + |J∪|)` with any
//!   predicted bicluster.
//! - Prelić relevance/recovery: row-set match `S(A,B) = mean_a max_b
//!   rowJaccard(a,b)`; relevance is `S(P,R)`, recovery `S(R,P)`.
//! - CSI (soft-correspondence Rand-type index over cell memberships): with
//!   `ρ_X(u,v)` the number of biclusters of X containing both cells and
//!   `σ_X(u,v) = max(δ_X(u), δ_X(v)) − ρ_X(u,v)` the number of separations,
//!   `CSI = Σ_{u<v} [min(ρ_P,ρ_R) + min(σ_P,σ_R)] /
//!          Σ_{u<v} [max(ρ_P,ρ_R) + max(σ_P,σ_R)]`, empty/empty → 1.
//! - Clustering-error similarity: `1 − CE`, where CE is the cell
//!   disagreement after the optimal one-to-one bicluster matching; equals
//!   (max-assignment Σ|p∩r|) / |cells(P) ∪ cells(R)|, with the union counted
//!   as `Σ_cells max(δ_P, δ_R)` when collections overlap themselves.
//! - FABIA consensus: maximum-weight one-to-one assignment on the
//!   cell-Jaccard matrix, summed and divided by `max(|P|, |R|)`.
//!
//! All scores live in [0, 1], equal 1 on identical non-empty inputs, and are
//! invariant to the listing order of either collection.

use thiserror::Error;

use crate::assignment::{assignment_weight, max_weight_assignment};
use crate::extract::{Bicluster, BiclusterSet};
use crate::matrix::BoolMatrix;
use crate::scalar::{real, Real};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("bicluster sets address different shapes: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),
    #[error("masks have different shapes: {0:?} vs {1:?}")]
    MaskShapeMismatch((usize, usize), (usize, usize)),
}

/// The six external bicluster scores, all oriented so larger is better.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport<F> {
    pub liu_wang: F,
    pub prelic_recovery: F,
    pub prelic_relevance: F,
    pub csi: F,
    pub clustering_error_similarity: F,
    pub fabia_consensus: F,
}

/// Confusion counts for recovered sparse-spike supports.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePRF<F> {
    pub precision: F,
    pub recall: F,
    pub f1: F,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Cell-level Jaccard index: `|cells(b1) ∩ cells(b2)| / |cells(b1) ∪ cells(b2)|`.
pub fn jaccard<F: Real>(b1: &Bicluster<F>, b2: &Bicluster<F>) -> F {
    let inter =
        sorted_intersection_len(b1.rows(), b2.rows()) * sorted_intersection_len(b1.cols(), b2.cols());
    let union = b1.n_cells() + b2.n_cells() - inter;
    if union == 0 {
        return F::zero();
    }
    real::<F>(inter as f64) / real::<F>(union as f64)
}

fn row_jaccard<F: Real>(a: &Bicluster<F>, b: &Bicluster<F>) -> F {
    let inter = sorted_intersection_len(a.rows(), b.rows());
    let union = a.rows().len() + b.rows().len() - inter;
    real::<F>(inter as f64) / real::<F>(union as f64)
}

fn check_shapes<F: Real>(p: &BiclusterSet<F>, r: &BiclusterSet<F>) -> Result<(), MetricsError> {
    if p.source_shape() != r.source_shape() {
        return Err(MetricsError::ShapeMismatch(
            p.source_shape(),
            r.source_shape(),
        ));
    }
    Ok(())
}

/// Liu–Wang match score of `predicted` against `reference`.
pub fn liu_wang_match<F: Real>(
    predicted: &BiclusterSet<F>,
    reference: &BiclusterSet<F>,
) -> Result<F, MetricsError> {
    check_shapes(predicted, reference)?;
    if predicted.is_empty() || reference.is_empty() {
        return Ok(F::zero());
    }
    let mut total = F::zero();
    for r in reference.biclusters() {
        let mut best = F::zero();
        for p in predicted.biclusters() {
            let row_inter = sorted_intersection_len(p.rows(), r.rows());
            let col_inter = sorted_intersection_len(p.cols(), r.cols());
            let num = row_inter + col_inter;
            let den = p.rows().len() + r.rows().len() - row_inter + p.cols().len()
                + r.cols().len()
                - col_inter;
            let score = real::<F>(num as f64) / real::<F>(den as f64);
            if score > best {
                best = score;
            }
        }
        total += best;
    }
    Ok(total / real::<F>(reference.len() as f64))
}

/// `(relevance, recovery)`: row-set based Prelić scores.
pub fn prelic_scores<F: Real>(
    predicted: &BiclusterSet<F>,
    reference: &BiclusterSet<F>,
) -> Result<(F, F), MetricsError> {
    check_shapes(predicted, reference)?;
    Ok((
        prelic_one_sided(predicted, reference),
        prelic_one_sided(reference, predicted),
    ))
}

fn prelic_one_sided<F: Real>(a: &BiclusterSet<F>, b: &BiclusterSet<F>) -> F {
    if a.is_empty() {
        return F::zero();
    }
    let mut total = F::zero();
    for ba in a.biclusters() {
        let mut best = F::zero();
        for bb in b.biclusters() {
            let s = row_jaccard(ba, bb);
            if s > best {
                best = s;
            }
        }
        total += best;
    }
    total / real::<F>(a.len() as f64)
}

/// Per-cell bicluster membership lists for one collection.
fn membership_lists<F: Real>(set: &BiclusterSet<F>) -> Vec<Vec<u32>> {
    let (n, m) = set.source_shape();
    let mut lists = vec![Vec::new(); n * m];
    for (id, b) in set.biclusters().iter().enumerate() {
        for &i in b.rows() {
            for &j in b.cols() {
                lists[i * m + j].push(id as u32);
            }
        }
    }
    lists
}

fn co_membership(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Campello-style soft-correspondence Rand index over cell memberships.
pub fn csi<F: Real>(
    predicted: &BiclusterSet<F>,
    reference: &BiclusterSet<F>,
) -> Result<F, MetricsError> {
    check_shapes(predicted, reference)?;
    let (n, m) = predicted.source_shape();
    let total_cells = n * m;
    let lists_p = membership_lists(predicted);
    let lists_r = membership_lists(reference);

    // Only cells covered somewhere can contribute to either sum; pairs of
    // two uncovered cells have ρ = σ = 0 on both sides.
    let covered: Vec<usize> = (0..total_cells)
        .filter(|&c| !lists_p[c].is_empty() || !lists_r[c].is_empty())
        .collect();
    let uncovered = total_cells - covered.len();

    let mut agree: f64 = 0.0;
    let mut denom: f64 = 0.0;
    for (idx, &u) in covered.iter().enumerate() {
        let du_p = lists_p[u].len();
        let du_r = lists_r[u].len();
        // Pairs with an uncovered partner: ρ = 0, σ_X = δ_X(u).
        agree += (du_p.min(du_r) * uncovered) as f64;
        denom += (du_p.max(du_r) * uncovered) as f64;

        for &v in covered.iter().skip(idx + 1) {
            let rho_p = co_membership(&lists_p[u], &lists_p[v]);
            let rho_r = co_membership(&lists_r[u], &lists_r[v]);
            let sep_p = du_p.max(lists_p[v].len()) - rho_p;
            let sep_r = du_r.max(lists_r[v].len()) - rho_r;
            agree += (rho_p.min(rho_r) + sep_p.min(sep_r)) as f64;
            denom += (rho_p.max(rho_r) + sep_p.max(sep_r)) as f64;
        }
    }
    if denom == 0.0 {
        return Ok(F::one()); // vacuous agreement, including both-empty
    }
    Ok(real::<F>(agree / denom))
}

/// `1 − CE`: the optimally matched shared-cell mass over the union of
/// covered cells.
pub fn clustering_error_similarity<F: Real>(
    predicted: &BiclusterSet<F>,
    reference: &BiclusterSet<F>,
) -> Result<F, MetricsError> {
    check_shapes(predicted, reference)?;
    if predicted.is_empty() && reference.is_empty() {
        return Ok(F::one());
    }
    if predicted.is_empty() || reference.is_empty() {
        return Ok(F::zero());
    }

    let weights: Vec<Vec<F>> = predicted
        .biclusters()
        .iter()
        .map(|p| {
            reference
                .biclusters()
                .iter()
                .map(|r| {
                    let inter = sorted_intersection_len(p.rows(), r.rows())
                        * sorted_intersection_len(p.cols(), r.cols());
                    real::<F>(inter as f64)
                })
                .collect()
        })
        .collect();
    let assignment = max_weight_assignment(&weights);
    let matched = assignment_weight(&weights, &assignment);

    // Union of covered cells, counted with multiplicity max(δ_P, δ_R) so
    // the score stays in [0, 1] for overlapping collections; for disjoint
    // ones this is exactly the number of distinct covered cells.
    let (n, m) = predicted.source_shape();
    let mut cover_p = vec![0u32; n * m];
    let mut cover_r = vec![0u32; n * m];
    for (set, cover) in [(predicted, &mut cover_p), (reference, &mut cover_r)] {
        for b in set.biclusters() {
            for &i in b.rows() {
                for &j in b.cols() {
                    cover[i * m + j] += 1;
                }
            }
        }
    }
    let union_size: u64 = cover_p
        .iter()
        .zip(&cover_r)
        .map(|(&a, &b)| u64::from(a.max(b)))
        .sum();
    if union_size == 0 {
        return Ok(F::one());
    }
    Ok(matched / real::<F>(union_size as f64))
}

/// FABIA consensus score: matched cell-Jaccard mass over `max(|P|, |R|)`.
pub fn fabia_consensus<F: Real>(
    predicted: &BiclusterSet<F>,
    reference: &BiclusterSet<F>,
) -> Result<F, MetricsError> {
    check_shapes(predicted, reference)?;
    if predicted.is_empty() && reference.is_empty() {
        return Ok(F::one());
    }
    if predicted.is_empty() || reference.is_empty() {
        return Ok(F::zero());
    }
    let weights: Vec<Vec<F>> = predicted
        .biclusters()
        .iter()
        .map(|p| {
            reference
                .biclusters()
                .iter()
                .map(|r| jaccard(p, r))
                .collect()
        })
        .collect();
    let assignment = max_weight_assignment(&weights);
    let matched = assignment_weight(&weights, &assignment);
    Ok(matched / real::<F>(predicted.len().max(reference.len()) as f64))
}

/// All six scores at once.
pub fn evaluate<F: Real>(
    predicted: &BiclusterSet<F>,
    reference: &BiclusterSet<F>,
) -> Result<MetricReport<F>, MetricsError> {
    let (prelic_relevance, prelic_recovery) = prelic_scores(predicted, reference)?;
    Ok(MetricReport {
        liu_wang: liu_wang_match(predicted, reference)?,
        prelic_recovery,
        prelic_relevance,
        csi: csi(predicted, reference)?,
        clustering_error_similarity: clustering_error_similarity(predicted, reference)?,
        fabia_consensus: fabia_consensus(predicted, reference)?,
    })
}

/// Entrywise confusion counts of a predicted spike support against the
/// planted one. Precision and recall fall back to 0 when undefined.
pub fn sparse_prf<F: Real>(
    predicted: &BoolMatrix,
    truth: &BoolMatrix,
) -> Result<SparsePRF<F>, MetricsError> {
    if predicted.shape() != truth.shape() {
        return Err(MetricsError::MaskShapeMismatch(
            predicted.shape(),
            truth.shape(),
        ));
    }
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for i in 0..predicted.n_rows() {
        for j in 0..predicted.n_cols() {
            match (predicted.get(i, j), truth.get(i, j)) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
    }
    let precision = if tp + fp > 0 {
        real::<F>(tp as f64) / real::<F>((tp + fp) as f64)
    } else {
        F::zero()
    };
    let recall = if tp + fn_ > 0 {
        real::<F>(tp as f64) / real::<F>((tp + fn_) as f64)
    } else {
        F::zero()
    };
    let two = F::one() + F::one();
    let f1 = if precision + recall > F::zero() {
        two * precision * recall / (precision + recall)
    } else {
        F::zero()
    };
    Ok(SparsePRF {
        precision,
        recall,
        f1,
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(rows: &[usize], cols: &[usize]) -> Bicluster<f64> {
        Bicluster::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    fn set(shape: (usize, usize), biclusters: Vec<Bicluster<f64>>) -> BiclusterSet<f64> {
        BiclusterSet::new(shape, biclusters).unwrap()
    }

    #[test]
    fn jaccard_examples() {
        let b1 = b(&[0, 1], &[0, 1]);
        assert_eq!(jaccard(&b1, &b1), 1.0);

        let disjoint = b(&[5, 6], &[5, 6]);
        assert_eq!(jaccard(&b1, &disjoint), 0.0);

        // 2x2 block vs a 1x2 sub-block: 2 shared cells of 4 total.
        let sub = b(&[0], &[0, 1]);
        assert_eq!(jaccard(&b1, &sub), 0.5);
    }

    #[test]
    fn liu_wang_identity_and_empty() {
        let s = set((10, 10), vec![b(&[0, 1, 2], &[0, 1]), b(&[5, 6], &[4, 5, 6])]);
        assert_eq!(liu_wang_match(&s, &s).unwrap(), 1.0);
        let empty = set((10, 10), vec![]);
        assert_eq!(liu_wang_match(&empty, &s).unwrap(), 0.0);
    }

    #[test]
    fn liu_wang_single_pair_hand_value() {
        // Reference 5 rows x 5 cols; prediction shares 3 rows and all 5 cols:
        // (3 + 5) / (7 + 5) = 2/3.
        let reference = set((20, 20), vec![b(&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4])]);
        let predicted = set((20, 20), vec![b(&[2, 3, 4, 5, 6], &[0, 1, 2, 3, 4])]);
        let got = liu_wang_match(&predicted, &reference).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn prelic_identity_and_empty() {
        let s = set((8, 8), vec![b(&[0, 1], &[0]), b(&[3, 4], &[5, 6])]);
        assert_eq!(prelic_scores(&s, &s).unwrap(), (1.0, 1.0));
        let empty = set((8, 8), vec![]);
        assert_eq!(prelic_scores(&empty, &s).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn prelic_half_recovery_pattern() {
        // One prediction exactly matching the first reference's rows; the
        // second reference is row-disjoint, so recovery averages 1 and 0.
        let reference = set((10, 10), vec![b(&[0, 1, 2], &[0, 1]), b(&[6, 7], &[3, 4])]);
        let predicted = set((10, 10), vec![b(&[0, 1, 2], &[8, 9])]);
        let (relevance, recovery) = prelic_scores(&predicted, &reference).unwrap();
        assert_eq!(relevance, 1.0);
        assert_eq!(recovery, 0.5);
    }

    #[test]
    fn csi_identity_and_empty_conventions() {
        let s = set((6, 6), vec![b(&[0, 1], &[0, 1]), b(&[3, 4], &[3, 4])]);
        assert_eq!(csi(&s, &s).unwrap(), 1.0);
        let empty = set((6, 6), vec![]);
        assert_eq!(csi(&empty, &empty).unwrap(), 1.0);
        let one = csi(&s, &empty).unwrap();
        assert!(one < 1.0);
    }

    #[test]
    fn clustering_error_examples() {
        let s = set((8, 8), vec![b(&[0, 1], &[0, 1])]);
        assert_eq!(clustering_error_similarity(&s, &s).unwrap(), 1.0);

        let other = set((8, 8), vec![b(&[5, 6], &[5, 6])]);
        assert_eq!(clustering_error_similarity(&s, &other).unwrap(), 0.0);

        // 4x4 fixture: predicted 2x2 at origin, reference 2x2 shifted by one
        // column: shared cells 2, union 6 -> 1/3.
        let p = set((4, 4), vec![b(&[0, 1], &[0, 1])]);
        let r = set((4, 4), vec![b(&[0, 1], &[1, 2])]);
        let got = clustering_error_similarity(&p, &r).unwrap();
        assert!((got - 2.0 / 6.0).abs() < 1e-12);

        let both_empty = set((4, 4), vec![]);
        assert_eq!(
            clustering_error_similarity(&both_empty, &both_empty).unwrap(),
            1.0
        );
    }

    #[test]
    fn ce_half_union_is_half() {
        // Prediction and reference share exactly half their union cells:
        // blocks [0,1]x[0,1] and [0,1]x[1,2] have union 6, intersection 2.
        // Use a pair sharing half: [0,1]x[0,3] vs [0,1]x[2,5] on a wider
        // grid: intersection cells 2*2=4, union 2*6=12 minus... construct
        // directly: rows {0,1}, pred cols {0,1,2,3}, ref cols {2,3,4,5}:
        // intersection 2x2=4, union 2x6=12, ratio 1/3. For the spec's 0.5
        // case use pred cols {0,1}, ref cols {0,1,2,3} on rows {0,1}:
        // shared 4, union 8.
        let p = set((4, 8), vec![b(&[0, 1], &[0, 1])]);
        let r = set((4, 8), vec![b(&[0, 1], &[0, 1, 2, 3])]);
        assert_eq!(clustering_error_similarity(&p, &r).unwrap(), 0.5);
    }

    #[test]
    fn fabia_identity_empty_and_denominator() {
        let s = set((10, 10), vec![b(&[0, 1], &[0, 1]), b(&[4, 5], &[4, 5])]);
        assert_eq!(fabia_consensus(&s, &s).unwrap(), 1.0);

        let empty = set((10, 10), vec![]);
        assert_eq!(fabia_consensus(&empty, &empty).unwrap(), 1.0);
        assert_eq!(fabia_consensus(&s, &empty).unwrap(), 0.0);

        // |P| = 2|R| with a perfect match for every reference: score 0.5.
        let reference = set((10, 10), vec![b(&[0, 1], &[0, 1])]);
        let predicted = set(
            (10, 10),
            vec![b(&[0, 1], &[0, 1]), b(&[7, 8], &[7, 8])],
        );
        assert_eq!(fabia_consensus(&predicted, &reference).unwrap(), 0.5);
    }

    #[test]
    fn listing_order_invariance() {
        let a = b(&[0, 1, 2], &[0, 1]);
        let c = b(&[4, 5], &[3, 4, 5]);
        let d = b(&[7], &[7, 8]);
        let fwd = set((10, 10), vec![a.clone(), c.clone(), d.clone()]);
        let rev = set((10, 10), vec![d, c, a]);
        let reference = set((10, 10), vec![b(&[0, 1], &[0, 1, 2]), b(&[4, 5, 6], &[4, 5])]);

        let r1 = evaluate(&fwd, &reference).unwrap();
        let r2 = evaluate(&rev, &reference).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let p = set((4, 4), vec![]);
        let r = set((5, 4), vec![]);
        assert!(matches!(
            liu_wang_match(&p, &r),
            Err(MetricsError::ShapeMismatch(..))
        ));
    }

    #[test]
    fn sparse_prf_examples() {
        let mut truth = BoolMatrix::new(10, 10);
        for k in 0..8 {
            truth.set(k, k, true);
        }
        let perfect = sparse_prf::<f64>(&truth, &truth).unwrap();
        assert_eq!(
            (perfect.precision, perfect.recall, perfect.f1),
            (1.0, 1.0, 1.0)
        );

        let none = BoolMatrix::new(10, 10);
        let empty_pred = sparse_prf::<f64>(&none, &truth).unwrap();
        assert_eq!(
            (empty_pred.precision, empty_pred.recall, empty_pred.f1),
            (0.0, 0.0, 0.0)
        );

        // All 8 true cells found plus 4 false alarms.
        let mut over = truth.clone();
        for k in 0..4 {
            over.set(9, k, true);
        }
        let got = sparse_prf::<f64>(&over, &truth).unwrap();
        assert_eq!(got.recall, 1.0);
        assert!((got.precision - 8.0 / 12.0).abs() < 1e-12);
        assert!((got.f1 - 2.0 * (8.0 / 12.0) / (1.0 + 8.0 / 12.0)).abs() < 1e-12);
        assert_eq!(
            (got.true_positives, got.false_positives, got.false_negatives),
            (8, 4, 0)
        );
    }

    #[test]
    fn sparse_prf_confusion_arithmetic() {
        // 150 true cells, prediction covers all plus 50 extra.
        let mut truth = BoolMatrix::new(20, 20);
        let mut pred = BoolMatrix::new(20, 20);
        let mut placed = 0;
        'outer: for i in 0..20 {
            for j in 0..20 {
                if placed < 150 {
                    truth.set(i, j, true);
                    pred.set(i, j, true);
                    placed += 1;
                } else if placed < 200 {
                    pred.set(i, j, true);
                    placed += 1;
                } else {
                    break 'outer;
                }
            }
        }
        let got = sparse_prf::<f64>(&pred, &truth).unwrap();
        assert_eq!(got.recall, 1.0);
        assert_eq!(got.precision, 0.75);
        assert!((got.f1 - 6.0 / 7.0).abs() < 1e-12);
    }
}
