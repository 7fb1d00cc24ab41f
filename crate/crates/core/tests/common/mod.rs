//! Brute-force oracle implementations shared by the integration suites.
//!
//! Each oracle recomputes a metric from its definition with naive set
//! operations and exhaustive enumeration, independent of the library's
//! implementation paths.

use std::collections::HashSet;

use biclust_core::extract::{Bicluster, BiclusterSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn cells(b: &Bicluster<f64>) -> HashSet<(usize, usize)> {
    let mut out = HashSet::new();
    for &i in b.rows() {
        for &j in b.cols() {
            out.insert((i, j));
        }
    }
    out
}

pub fn oracle_jaccard(a: &Bicluster<f64>, b: &Bicluster<f64>) -> f64 {
    let ca = cells(a);
    let cb = cells(b);
    let inter = ca.intersection(&cb).count();
    let union = ca.union(&cb).count();
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

pub fn oracle_liu_wang(p: &BiclusterSet<f64>, r: &BiclusterSet<f64>) -> f64 {
    if p.is_empty() || r.is_empty() {
        return 0.0;
    }
    let mut total = 0.0;
    for rb in r.biclusters() {
        let r_rows: HashSet<usize> = rb.rows().iter().copied().collect();
        let r_cols: HashSet<usize> = rb.cols().iter().copied().collect();
        let mut best = 0.0f64;
        for pb in p.biclusters() {
            let p_rows: HashSet<usize> = pb.rows().iter().copied().collect();
            let p_cols: HashSet<usize> = pb.cols().iter().copied().collect();
            let num =
                (p_rows.intersection(&r_rows).count() + p_cols.intersection(&r_cols).count()) as f64;
            let den =
                (p_rows.union(&r_rows).count() + p_cols.union(&r_cols).count()) as f64;
            best = best.max(num / den);
        }
        total += best;
    }
    total / r.len() as f64
}

fn oracle_row_jaccard(a: &Bicluster<f64>, b: &Bicluster<f64>) -> f64 {
    let ra: HashSet<usize> = a.rows().iter().copied().collect();
    let rb: HashSet<usize> = b.rows().iter().copied().collect();
    ra.intersection(&rb).count() as f64 / ra.union(&rb).count() as f64
}

pub fn oracle_prelic(p: &BiclusterSet<f64>, r: &BiclusterSet<f64>) -> (f64, f64) {
    let one_sided = |a: &BiclusterSet<f64>, b: &BiclusterSet<f64>| -> f64 {
        if a.is_empty() {
            return 0.0;
        }
        a.biclusters()
            .iter()
            .map(|ba| {
                b.biclusters()
                    .iter()
                    .map(|bb| oracle_row_jaccard(ba, bb))
                    .fold(0.0f64, f64::max)
            })
            .sum::<f64>()
            / a.len() as f64
    };
    (one_sided(p, r), one_sided(r, p))
}

pub fn oracle_csi(p: &BiclusterSet<f64>, r: &BiclusterSet<f64>) -> f64 {
    let (n, m) = p.source_shape();
    let all_cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .collect();
    let membership = |set: &BiclusterSet<f64>, cell: (usize, usize)| -> usize {
        set.biclusters()
            .iter()
            .filter(|b| b.contains_cell(cell.0, cell.1))
            .count()
    };
    let co = |set: &BiclusterSet<f64>, u: (usize, usize), v: (usize, usize)| -> usize {
        set.biclusters()
            .iter()
            .filter(|b| b.contains_cell(u.0, u.1) && b.contains_cell(v.0, v.1))
            .count()
    };

    let mut agree = 0.0f64;
    let mut denom = 0.0f64;
    for (a, &u) in all_cells.iter().enumerate() {
        for &v in all_cells.iter().skip(a + 1) {
            let rho_p = co(p, u, v);
            let rho_r = co(r, u, v);
            let sep_p = membership(p, u).max(membership(p, v)) - rho_p;
            let sep_r = membership(r, u).max(membership(r, v)) - rho_r;
            agree += (rho_p.min(rho_r) + sep_p.min(sep_r)) as f64;
            denom += (rho_p.max(rho_r) + sep_p.max(sep_r)) as f64;
        }
    }
    if denom == 0.0 {
        1.0
    } else {
        agree / denom
    }
}

/// All injective maps from the smaller collection into the larger, scored
/// by a pairwise weight function; returns the best total.
fn best_injective_total(
    p_len: usize,
    r_len: usize,
    weight: &dyn Fn(usize, usize) -> f64,
) -> f64 {
    let (small, large, flip) = if p_len <= r_len {
        (p_len, r_len, false)
    } else {
        (r_len, p_len, true)
    };
    let mut indices: Vec<usize> = (0..large).collect();
    let mut best = 0.0f64;
    fn permute(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
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
    permute(&mut indices, 0, &mut |perm| {
        let total: f64 = (0..small)
            .map(|i| {
                if flip {
                    weight(perm[i], i)
                } else {
                    weight(i, perm[i])
                }
            })
            .sum();
        best = best.max(total);
    });
    best
}

pub fn oracle_clustering_error_similarity(p: &BiclusterSet<f64>, r: &BiclusterSet<f64>) -> f64 {
    if p.is_empty() && r.is_empty() {
        return 1.0;
    }
    if p.is_empty() || r.is_empty() {
        return 0.0;
    }
    let p_cells: Vec<HashSet<(usize, usize)>> = p.biclusters().iter().map(cells).collect();
    let r_cells: Vec<HashSet<(usize, usize)>> = r.biclusters().iter().map(cells).collect();
    let best = best_injective_total(p.len(), r.len(), &|i, j| {
        p_cells[i].intersection(&r_cells[j]).count() as f64
    });
    // Union counted with multiplicity max(δ_P, δ_R) per cell.
    let (n, m) = p.source_shape();
    let mut union_size = 0.0f64;
    for i in 0..n {
        for j in 0..m {
            let dp = p_cells.iter().filter(|c| c.contains(&(i, j))).count();
            let dr = r_cells.iter().filter(|c| c.contains(&(i, j))).count();
            union_size += dp.max(dr) as f64;
        }
    }
    best / union_size
}

pub fn oracle_fabia_consensus(p: &BiclusterSet<f64>, r: &BiclusterSet<f64>) -> f64 {
    if p.is_empty() && r.is_empty() {
        return 1.0;
    }
    if p.is_empty() || r.is_empty() {
        return 0.0;
    }
    let best = best_injective_total(p.len(), r.len(), &|i, j| {
        oracle_jaccard(&p.biclusters()[i], &r.biclusters()[j])
    });
    best / p.len().max(r.len()) as f64
}

/// Random bicluster collection on a small grid: up to `max_biclusters`
/// blocks with 1–4 rows and 1–4 columns each.
pub fn random_set(
    shape: (usize, usize),
    max_biclusters: usize,
    rng: &mut ChaCha8Rng,
) -> BiclusterSet<f64> {
    let count = rng.random_range(0..=max_biclusters);
    let mut biclusters = Vec::new();
    for _ in 0..count {
        let n_rows = rng.random_range(1..=4.min(shape.0));
        let n_cols = rng.random_range(1..=4.min(shape.1));
        let mut rows = HashSet::new();
        while rows.len() < n_rows {
            rows.insert(rng.random_range(0..shape.0));
        }
        let mut cols = HashSet::new();
        while cols.len() < n_cols {
            cols.insert(rng.random_range(0..shape.1));
        }
        biclusters.push(
            Bicluster::new(rows.into_iter().collect(), cols.into_iter().collect()).unwrap(),
        );
    }
    BiclusterSet::new(shape, biclusters).unwrap()
}
