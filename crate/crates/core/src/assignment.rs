//! Maximum-weight one-to-one assignment (Hungarian algorithm).
//!
//! O(n³) shortest-augmenting-path formulation with dual potentials. Used by
//! the consensus and clustering-error metrics to match predicted biclusters
//! against reference ones.

use crate::scalar::Real;

/// Maximum-weight one-to-one assignment on a rectangular weight matrix.
///
/// Returns `assignment[i] = Some(j)` when row `i` is matched to column `j`.
/// Every row of the smaller side is matched; with non-negative weights this
/// attains the maximum total weight over all partial matchings.
pub fn max_weight_assignment<F: Real>(weights: &[Vec<F>]) -> Vec<Option<usize>> {
    let n_rows = weights.len();
    let n_cols = weights.first().map_or(0, Vec::len);
    if n_rows == 0 || n_cols == 0 {
        return vec![None; n_rows];
    }
    debug_assert!(weights.iter().all(|row| row.len() == n_cols));

    if n_rows <= n_cols {
        min_cost_assignment(&negate(weights))
    } else {
        // Transpose so the algorithm's "every row matched" orientation holds.
        let transposed: Vec<Vec<F>> = (0..n_cols)
            .map(|j| (0..n_rows).map(|i| weights[i][j]).collect())
            .collect();
        let col_to_row = min_cost_assignment(&negate(&transposed));
        let mut assignment = vec![None; n_rows];
        for (j, row) in col_to_row.iter().enumerate() {
            if let Some(i) = row {
                assignment[*i] = Some(j);
            }
        }
        assignment
    }
}

/// Total weight of an assignment produced by [`max_weight_assignment`].
pub fn assignment_weight<F: Real>(weights: &[Vec<F>], assignment: &[Option<usize>]) -> F {
    assignment
        .iter()
        .enumerate()
        .filter_map(|(i, j)| j.map(|j| weights[i][j]))
        .fold(F::zero(), |acc, w| acc + w)
}

fn negate<F: Real>(weights: &[Vec<F>]) -> Vec<Vec<F>> {
    weights
        .iter()
        .map(|row| row.iter().map(|&w| -w).collect())
        .collect()
}

/// Minimum-cost assignment for `n_rows ≤ n_cols`; every row gets a column.
fn min_cost_assignment<F: Real>(cost: &[Vec<F>]) -> Vec<Option<usize>> {
    let n = cost.len();
    let m = cost[0].len();
    debug_assert!(n <= m);

    // 1-based potentials over rows (u) and columns (v); way[j] is the
    // predecessor column on the shortest augmenting path.
    let mut u = vec![F::zero(); n + 1];
    let mut v = vec![F::zero(); m + 1];
    let mut match_col = vec![0usize; m + 1]; // column -> row (1-based, 0 = free)

    for i in 1..=n {
        match_col[0] = i;
        let mut j0 = 0usize;
        let mut min_v = vec![F::infinity(); m + 1];
        let mut used = vec![false; m + 1];
        let mut way = vec![0usize; m + 1];

        loop {
            used[j0] = true;
            let i0 = match_col[j0];
            let mut delta = F::infinity();
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < min_v[j] {
                    min_v[j] = cur;
                    way[j] = j0;
                }
                if min_v[j] < delta {
                    delta = min_v[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[match_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_v[j] -= delta;
                }
            }
            j0 = j1;
            if match_col[j0] == 0 {
                break;
            }
        }

        // Augment along the path back to the free column.
        loop {
            let j1 = way[j0];
            match_col[j0] = match_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![None; n];
    for j in 1..=m {
        if match_col[j] != 0 {
            assignment[match_col[j] - 1] = Some(j - 1);
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive search over all injective maps from the smaller side into
    /// the larger side.
    fn brute_force_best(weights: &[Vec<f64>]) -> f64 {
        let n = weights.len();
        let m = weights[0].len();
        let mut best = f64::NEG_INFINITY;
        if n <= m {
            let mut cols: Vec<usize> = (0..m).collect();
            permute(&mut cols, 0, &mut |perm| {
                let total: f64 = (0..n).map(|i| weights[i][perm[i]]).sum();
                if total > best {
                    best = total;
                }
            });
        } else {
            let mut rows: Vec<usize> = (0..n).collect();
            permute(&mut rows, 0, &mut |perm| {
                let total: f64 = (0..m).map(|j| weights[perm[j]][j]).sum();
                if total > best {
                    best = total;
                }
            });
        }
        best
    }

    fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    #[test]
    fn three_by_three_known_optimum() {
        let w: Vec<Vec<f64>> = vec![
            vec![0.9, 0.1, 0.0],
            vec![0.2, 0.8, 0.3],
            vec![0.0, 0.4, 0.7],
        ];
        let a = max_weight_assignment(&w);
        assert_eq!(a, vec![Some(0), Some(1), Some(2)]);
        assert!((assignment_weight(&w, &a) - 2.4).abs() < 1e-12);
    }

    #[test]
    fn forced_off_diagonal() {
        let w = vec![vec![1.0, 10.0], vec![10.0, 1.0]];
        let a = max_weight_assignment(&w);
        assert_eq!(a, vec![Some(1), Some(0)]);
    }

    #[test]
    fn rectangular_shapes_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, m) in [(2, 5), (5, 2), (4, 4), (3, 6), (6, 3), (1, 4), (5, 5)] {
            for _ in 0..20 {
                let w: Vec<Vec<f64>> = (0..n)
                    .map(|_| (0..m).map(|_| rng.random::<f64>()).collect())
                    .collect();
                let a = max_weight_assignment(&w);
                let got = assignment_weight(&w, &a);
                let best = brute_force_best(&w);
                assert!(
                    (got - best).abs() < 1e-9,
                    "{n}x{m}: got {got}, brute force {best}"
                );
                // One-to-one.
                let mut seen = std::collections::HashSet::new();
                for j in a.iter().flatten() {
                    assert!(seen.insert(*j), "column {j} matched twice");
                }
                assert_eq!(seen.len(), n.min(m));
            }
        }
    }

    #[test]
    fn empty_sides() {
        let a = max_weight_assignment::<f64>(&[]);
        assert!(a.is_empty());
    }
}
