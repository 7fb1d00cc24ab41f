//! Thin singular value decomposition.
//!
//! Golub–Kahan two-phase scheme: Householder bidiagonalization followed by
//! implicit-shift QR iteration on the bidiagonal, with rotations accumulated
//! into the thin factors. Wide matrices are factored through their
//! transpose. Left singular vectors are sign-canonicalized so that the
//! largest-magnitude entry of each is positive, which keeps seeded test
//! fixtures reproducible.

use thiserror::Error;

use crate::matrix::DenseMatrix;
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum SvdError {
    #[error("SVD iteration failed to converge for a {n_rows}x{n_cols} matrix")]
    NonConvergence { n_rows: usize, n_cols: usize },
}

/// Thin SVD `M = U · diag(σ) · Vᵀ` with `r = min(n_rows, n_cols)`.
#[derive(Debug, Clone)]
pub struct SvdFactors<F> {
    left: DenseMatrix<F>,
    singular_values: Vec<F>,
    right: DenseMatrix<F>,
}

impl<F: Real> SvdFactors<F> {
    /// `U`: n×r, column-orthonormal.
    pub fn left_vectors(&self) -> &DenseMatrix<F> {
        &self.left
    }

    /// Non-negative, sorted non-increasing, length r.
    pub fn singular_values(&self) -> &[F] {
        &self.singular_values
    }

    /// `V`: m×r, column-orthonormal.
    pub fn right_vectors(&self) -> &DenseMatrix<F> {
        &self.right
    }

    /// `U · diag(σ) · Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix<F> {
        self.reconstruct_with_values(&self.singular_values)
    }

    /// Reconstruction with the stored singular values replaced, used by the
    /// singular value thresholding operator.
    pub fn reconstruct_with_values(&self, values: &[F]) -> DenseMatrix<F> {
        assert_eq!(values.len(), self.singular_values.len());
        let n = self.left.n_rows();
        let m = self.right.n_rows();
        let r = values.len();
        let mut out = vec![F::zero(); n * m];
        for (k, &s) in values.iter().enumerate().take(r) {
            if s == F::zero() {
                continue;
            }
            for i in 0..n {
                let us = self.left.get(i, k) * s;
                let row = &mut out[i * m..(i + 1) * m];
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = *slot + us * self.right.get(j, k);
                }
            }
        }
        DenseMatrix::from_vec(n, m, out).expect("reconstruction of finite factors is finite")
    }
}

/// Number of singular values above the relative cutoff `1e-8 · σ₁`.
pub fn numerical_rank<F: Real>(singular_values: &[F]) -> usize {
    let largest = singular_values.first().copied().unwrap_or_else(F::zero);
    if largest <= F::zero() {
        return 0;
    }
    let cutoff = crate::scalar::real::<F>(1e-8) * largest;
    singular_values.iter().filter(|&&s| s > cutoff).count()
}

/// Full thin SVD of `m`.
pub fn svd<F: Real>(matrix: &DenseMatrix<F>) -> Result<SvdFactors<F>, SvdError> {
    let (n, m) = matrix.shape();
    let wide = n < m;
    let work = if wide {
        matrix.transpose()
    } else {
        matrix.clone()
    };

    let (u, s, v) = golub_kahan(&work).map_err(|_| SvdError::NonConvergence {
        n_rows: n,
        n_cols: m,
    })?;

    let (mut left, mut right) = if wide { (v, u) } else { (u, v) };
    canonicalize_signs(&mut left, &mut right);

    Ok(SvdFactors {
        left: to_matrix(left),
        singular_values: s,
        right: to_matrix(right),
    })
}

// Column-major working buffer; columns are contiguous, which is the access
// pattern of every rotation and reflector below.
struct Cols<F> {
    rows: usize,
    data: Vec<Vec<F>>,
}

impl<F: Real> Cols<F> {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            data: vec![vec![F::zero(); rows]; cols],
        }
    }

    fn eye(rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for j in 0..cols.min(rows) {
            out.data[j][j] = F::one();
        }
        out
    }

    fn from_matrix(m: &DenseMatrix<F>) -> Self {
        let (rows, cols) = m.shape();
        let mut out = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                out.data[j][i] = m.get(i, j);
            }
        }
        out
    }

    fn ncols(&self) -> usize {
        self.data.len()
    }

    /// Applies the rotation `[c s; -s c]` to columns `j1`, `j2`.
    fn rotate_columns(&mut self, j1: usize, j2: usize, c: F, s: F) {
        debug_assert_ne!(j1, j2);
        let (a, b) = if j1 < j2 {
            let (lo, hi) = self.data.split_at_mut(j2);
            (&mut lo[j1], &mut hi[0])
        } else {
            let (lo, hi) = self.data.split_at_mut(j1);
            (&mut hi[0], &mut lo[j2])
        };
        for i in 0..self.rows {
            let x = a[i];
            let y = b[i];
            a[i] = c * x + s * y;
            b[i] = c * y - s * x;
        }
    }

    fn swap_columns(&mut self, j1: usize, j2: usize) {
        self.data.swap(j1, j2);
    }

    fn negate_column(&mut self, j: usize) {
        for v in &mut self.data[j] {
            *v = -*v;
        }
    }
}

fn to_matrix<F: Real>(cols: Cols<F>) -> DenseMatrix<F> {
    let rows = cols.rows;
    let ncols = cols.ncols();
    DenseMatrix::from_fn(rows, ncols, |i, j| cols.data[j][i])
        .expect("orthogonal factor entries are finite")
}

struct Reflector<F> {
    // Householder vector; empty means identity.
    v: Vec<F>,
    tau: F,
}

/// SVD of a tall matrix (`n ≥ m`): returns `(U n×m, σ desc, V m×m)`.
#[allow(clippy::type_complexity)]
fn golub_kahan<F: Real>(a: &DenseMatrix<F>) -> Result<(Cols<F>, Vec<F>, Cols<F>), ()> {
    let (n, m) = a.shape();
    debug_assert!(n >= m);
    let mut work = Cols::from_matrix(a);
    let mut diag = vec![F::zero(); m];
    let mut off = vec![F::zero(); m.saturating_sub(1)];
    let mut left_refl: Vec<Reflector<F>> = Vec::with_capacity(m);
    let mut right_refl: Vec<Reflector<F>> = Vec::with_capacity(m.saturating_sub(1));

    // Phase 1: Householder bidiagonalization.
    for k in 0..m {
        left_refl.push(make_reflector_column(&mut work, k, m));
        diag[k] = work.data[k][k];

        if k + 1 < m {
            right_refl.push(make_reflector_row(&mut work, k, n, m));
            off[k] = work.data[k + 1][k];
        }
    }

    // Backward accumulation of the thin factors.
    let mut u = Cols::eye(n, m);
    for k in (0..m).rev() {
        apply_reflector_to_rows(&mut u, &left_refl[k], k, 0, m);
    }
    let mut v = Cols::eye(m, m);
    for k in (0..right_refl.len()).rev() {
        apply_reflector_to_rows(&mut v, &right_refl[k], k + 1, 0, m);
    }

    // Phase 2: implicit-shift QR on the bidiagonal.
    bidiagonal_qr(&mut diag, &mut off, &mut u, &mut v)?;

    // Descending order with column permutation of both factors.
    for i in 0..m {
        let mut best = i;
        for j in (i + 1)..m {
            if diag[j] > diag[best] {
                best = j;
            }
        }
        if best != i {
            diag.swap(i, best);
            u.swap_columns(i, best);
            v.swap_columns(i, best);
        }
    }

    Ok((u, diag, v))
}

/// Householder reflector zeroing `work[k+1.., k]`; applied to columns `k..m`.
fn make_reflector_column<F: Real>(work: &mut Cols<F>, k: usize, m: usize) -> Reflector<F> {
    let n = work.rows;
    let norm_sq: F = (k..n).map(|i| work.data[k][i] * work.data[k][i]).sum();
    if norm_sq == F::zero() {
        return Reflector {
            v: Vec::new(),
            tau: F::zero(),
        };
    }
    let norm = norm_sq.sqrt();
    let x0 = work.data[k][k];
    let alpha = if x0 >= F::zero() { -norm } else { norm };
    let mut v = vec![F::zero(); n - k];
    v[0] = x0 - alpha;
    for i in (k + 1)..n {
        v[i - k] = work.data[k][i];
    }
    let vtv: F = v.iter().map(|&x| x * x).sum();
    let tau = (F::one() + F::one()) / vtv;
    let refl = Reflector { v, tau };

    for j in k..m {
        apply_reflector_to_column(&mut work.data[j], &refl, k);
    }
    work.data[k][k] = alpha;
    for i in (k + 1)..n {
        work.data[k][i] = F::zero();
    }
    refl
}

/// Householder reflector zeroing `work[k, k+2..]`; applied from the right to
/// rows `k..n`.
fn make_reflector_row<F: Real>(work: &mut Cols<F>, k: usize, n: usize, m: usize) -> Reflector<F> {
    let start = k + 1;
    let norm_sq: F = (start..m).map(|j| work.data[j][k] * work.data[j][k]).sum();
    if norm_sq == F::zero() {
        return Reflector {
            v: Vec::new(),
            tau: F::zero(),
        };
    }
    let norm = norm_sq.sqrt();
    let x0 = work.data[start][k];
    let alpha = if x0 >= F::zero() { -norm } else { norm };
    let mut v = vec![F::zero(); m - start];
    v[0] = x0 - alpha;
    for j in (start + 1)..m {
        v[j - start] = work.data[j][k];
    }
    let vtv: F = v.iter().map(|&x| x * x).sum();
    let tau = (F::one() + F::one()) / vtv;
    let refl = Reflector { v, tau };

    for i in k..n {
        // Row i restricted to columns start..m.
        let dot: F = (start..m)
            .map(|j| work.data[j][i] * refl.v[j - start])
            .sum();
        let scale = refl.tau * dot;
        for j in start..m {
            work.data[j][i] = work.data[j][i] - scale * refl.v[j - start];
        }
    }
    work.data[start][k] = alpha;
    for j in (start + 1)..m {
        work.data[j][k] = F::zero();
    }
    refl
}

fn apply_reflector_to_column<F: Real>(col: &mut [F], refl: &Reflector<F>, offset: usize) {
    if refl.v.is_empty() {
        return;
    }
    let dot: F = refl
        .v
        .iter()
        .enumerate()
        .map(|(i, &vi)| vi * col[offset + i])
        .sum();
    let scale = refl.tau * dot;
    for (i, &vi) in refl.v.iter().enumerate() {
        col[offset + i] = col[offset + i] - scale * vi;
    }
}

fn apply_reflector_to_rows<F: Real>(
    target: &mut Cols<F>,
    refl: &Reflector<F>,
    offset: usize,
    col_lo: usize,
    col_hi: usize,
) {
    if refl.v.is_empty() {
        return;
    }
    for j in col_lo..col_hi {
        apply_reflector_to_column(&mut target.data[j], refl, offset);
    }
}

/// Givens rotation with `c·x + s·y = r`, `c·y − s·x = 0`.
fn givens<F: Real>(x: F, y: F) -> (F, F) {
    if y == F::zero() {
        return (F::one(), F::zero());
    }
    if x == F::zero() {
        return (F::zero(), F::one());
    }
    let h = x.hypot(y);
    (x / h, y / h)
}

/// Implicit-shift QR on a bidiagonal, rotations accumulated into `u`/`v`.
/// On return `diag` holds non-negative values (unsorted).
fn bidiagonal_qr<F: Real>(
    diag: &mut [F],
    off: &mut [F],
    u: &mut Cols<F>,
    v: &mut Cols<F>,
) -> Result<(), ()> {
    let m = diag.len();
    let eps = F::epsilon();
    // Sweep budget; convergence typically needs a couple of sweeps per value.
    let max_sweeps = 100 * m.max(1);
    let mut sweeps = 0usize;
    let mut hi = m.saturating_sub(1);

    'outer: while hi > 0 {
        // Deflate converged trailing entries.
        let threshold = eps * (diag[hi - 1].abs() + diag[hi].abs());
        if off[hi - 1].abs() <= threshold {
            off[hi - 1] = F::zero();
            hi -= 1;
            continue;
        }

        // Lowest index of the unreduced block ending at hi.
        let mut lo = hi - 1;
        while lo > 0 {
            let t = eps * (diag[lo - 1].abs() + diag[lo].abs());
            if off[lo - 1].abs() <= t {
                off[lo - 1] = F::zero();
                break;
            }
            lo -= 1;
        }

        sweeps += 1;
        if sweeps > max_sweeps {
            return Err(());
        }

        // A zero diagonal inside the block breaks the shift formula; chase
        // the adjacent off-diagonal entry off the bottom with left rotations.
        let block_scale = (lo..=hi)
            .map(|i| diag[i].abs())
            .fold(F::zero(), F::max)
            .max((lo..hi).map(|i| off[i].abs()).fold(F::zero(), F::max));
        for idx in lo..hi {
            if diag[idx].abs() <= eps * block_scale {
                diag[idx] = F::zero();
                let mut z = off[idx];
                off[idx] = F::zero();
                for j in (idx + 1)..=hi {
                    let (c, s) = givens(diag[j], z);
                    diag[j] = c * diag[j] + s * z;
                    if j < hi {
                        z = -s * off[j];
                        off[j] = c * off[j];
                    }
                    // Left rotation mixes rows j and idx: U ← U·Gᵀ.
                    u.rotate_columns(j, idx, c, s);
                }
                continue 'outer;
            }
        }

        // Wilkinson shift from the trailing 2×2 of BᵀB.
        let d_hi = diag[hi];
        let d_hi1 = diag[hi - 1];
        let e_hi1 = off[hi - 1];
        let e_hi2 = if hi >= 2 && hi - 2 >= lo {
            off[hi - 2]
        } else {
            F::zero()
        };
        let t11 = d_hi1 * d_hi1 + e_hi2 * e_hi2;
        let t12 = d_hi1 * e_hi1;
        let t22 = d_hi * d_hi + e_hi1 * e_hi1;
        let two = F::one() + F::one();
        let mu = if t12 == F::zero() {
            t22
        } else {
            let d = (t11 - t22) / two;
            let sign_d = if d >= F::zero() { F::one() } else { -F::one() };
            t22 - t12 * t12 / (d + sign_d * (d * d + t12 * t12).sqrt())
        };

        // Bulge chase.
        let mut x = diag[lo] * diag[lo] - mu;
        let mut z = diag[lo] * off[lo];
        for k in lo..hi {
            let (c, s) = givens(x, z);
            if k > lo {
                off[k - 1] = c * x + s * z;
            }
            let dk = diag[k];
            let ek = off[k];
            let dk1 = diag[k + 1];
            diag[k] = c * dk + s * ek;
            off[k] = c * ek - s * dk;
            let bulge = s * dk1;
            diag[k + 1] = c * dk1;
            v.rotate_columns(k, k + 1, c, s);

            let (c2, s2) = givens(diag[k], bulge);
            diag[k] = c2 * diag[k] + s2 * bulge;
            let old_ek = off[k];
            let old_dk1 = diag[k + 1];
            off[k] = c2 * old_ek + s2 * old_dk1;
            diag[k + 1] = c2 * old_dk1 - s2 * old_ek;
            if k + 1 < hi {
                let old_ek1 = off[k + 1];
                x = off[k];
                z = s2 * old_ek1;
                off[k + 1] = c2 * old_ek1;
            }
            u.rotate_columns(k, k + 1, c2, s2);
        }
    }

    for i in 0..m {
        if diag[i] < F::zero() {
            diag[i] = -diag[i];
            u.negate_column(i);
        }
    }
    Ok(())
}

/// Flips factor-column pairs so the largest-magnitude entry of each left
/// singular vector is positive. Ties resolve to the first occurrence.
fn canonicalize_signs<F: Real>(left: &mut Cols<F>, right: &mut Cols<F>) {
    for j in 0..left.ncols() {
        let mut best = 0usize;
        let mut best_abs = F::zero();
        for (i, &val) in left.data[j].iter().enumerate() {
            if val.abs() > best_abs {
                best_abs = val.abs();
                best = i;
            }
        }
        if left.data[j][best] < F::zero() {
            left.negate_column(j);
            right.negate_column(j);
        }
    }
}
