//! Dense row-major matrix with optional row/column labels.
//!
//! `DenseMatrix` is immutable after construction and validated on every
//! constructor: the value buffer has exactly `n_rows × n_cols` finite
//! entries and label lengths match their dimension. All operations are
//! pure functions returning fresh matrices, so values can be shared freely
//! across threads.

use thiserror::Error;

use crate::scalar::{compensated_sum, Real};
use crate::svd;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column, got {n_rows}x{n_cols}")]
    EmptyShape { n_rows: usize, n_cols: usize },
    #[error("value buffer holds {got} entries, expected {n_rows}x{n_cols} = {expected}")]
    BufferLength {
        n_rows: usize,
        n_cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("{axis} labels have length {got}, expected {expected}")]
    LabelLength {
        axis: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("index ({row}, {col}) out of bounds for {n_rows}x{n_cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },
    #[error("invalid permutation of length {len}")]
    BadPermutation { len: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<F> {
    n_rows: usize,
    n_cols: usize,
    values: Vec<F>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl<F: Real> DenseMatrix<F> {
    pub fn from_vec(n_rows: usize, n_cols: usize, values: Vec<F>) -> Result<Self, MatrixError> {
        if n_rows == 0 || n_cols == 0 {
            return Err(MatrixError::EmptyShape { n_rows, n_cols });
        }
        let expected = n_rows * n_cols;
        if values.len() != expected {
            return Err(MatrixError::BufferLength {
                n_rows,
                n_cols,
                expected,
                got: values.len(),
            });
        }
        for (idx, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(MatrixError::NonFinite {
                    row: idx / n_cols,
                    col: idx % n_cols,
                });
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            values,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, MatrixError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(n_rows * n_cols);
        for row in &rows {
            if row.len() != n_cols {
                return Err(MatrixError::BufferLength {
                    n_rows,
                    n_cols,
                    expected: n_cols,
                    got: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::from_vec(n_rows, n_cols, values)
    }

    pub fn from_fn(
        n_rows: usize,
        n_cols: usize,
        mut f: impl FnMut(usize, usize) -> F,
    ) -> Result<Self, MatrixError> {
        let mut values = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                values.push(f(i, j));
            }
        }
        Self::from_vec(n_rows, n_cols, values)
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self::from_vec(n_rows, n_cols, vec![F::zero(); n_rows * n_cols])
            .expect("zero matrix is always valid")
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
            .expect("identity matrix is always valid")
    }

    pub fn with_labels(
        mut self,
        row_labels: Option<Vec<String>>,
        col_labels: Option<Vec<String>>,
    ) -> Result<Self, MatrixError> {
        if let Some(labels) = &row_labels {
            if labels.len() != self.n_rows {
                return Err(MatrixError::LabelLength {
                    axis: "row",
                    expected: self.n_rows,
                    got: labels.len(),
                });
            }
        }
        if let Some(labels) = &col_labels {
            if labels.len() != self.n_cols {
                return Err(MatrixError::LabelLength {
                    axis: "column",
                    expected: self.n_cols,
                    got: labels.len(),
                });
            }
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> F {
        debug_assert!(row < self.n_rows && col < self.n_cols);
        self.values[row * self.n_cols + col]
    }

    #[inline]
    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.n_rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn transpose(&self) -> Self {
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..self.n_cols {
            for i in 0..self.n_rows {
                values.push(self.get(i, j));
            }
        }
        let mut out = Self::from_vec(self.n_cols, self.n_rows, values)
            .expect("transpose preserves validity");
        out.row_labels = self.col_labels.clone();
        out.col_labels = self.row_labels.clone();
        out
    }

    /// Entrywise map. Fails if the image contains a non-finite value.
    pub fn map(&self, f: impl Fn(F) -> F) -> Result<Self, MatrixError> {
        let values = self.values.iter().map(|&v| f(v)).collect();
        let mut out = Self::from_vec(self.n_rows, self.n_cols, values)?;
        out.row_labels = self.row_labels.clone();
        out.col_labels = self.col_labels.clone();
        Ok(out)
    }

    /// Entrywise combination of two equally shaped matrices.
    pub fn zip_map(&self, other: &Self, f: impl Fn(F, F) -> F) -> Result<Self, MatrixError> {
        self.check_same_shape(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::from_vec(self.n_rows, self.n_cols, values)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn scale(&self, c: F) -> Result<Self, MatrixError> {
        self.map(|v| v * c)
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<(), MatrixError> {
        if self.shape() != other.shape() {
            return Err(MatrixError::ShapeMismatch {
                left_rows: self.n_rows,
                left_cols: self.n_cols,
                right_rows: other.n_rows,
                right_cols: other.n_cols,
            });
        }
        Ok(())
    }

    /// `sqrt(Σ M_ij²)`.
    pub fn frobenius_norm(&self) -> F {
        compensated_sum(self.values.iter().map(|&v| v * v)).sqrt()
    }

    /// `Σ |M_ij|`.
    pub fn l1_norm(&self) -> F {
        compensated_sum(self.values.iter().map(|&v| v.abs()))
    }

    /// Sum of singular values, the convex surrogate for rank.
    pub fn nuclear_norm(&self) -> Result<F, svd::SvdError> {
        let factors = svd::svd(self)?;
        Ok(compensated_sum(
            factors.singular_values().iter().copied(),
        ))
    }

    pub fn max_abs(&self) -> F {
        self.values
            .iter()
            .fold(F::zero(), |acc, &v| acc.max(v.abs()))
    }

    /// `‖self − other‖_F / max(1, ‖other‖_F)`.
    pub fn rel_frobenius_distance(&self, other: &Self) -> Result<F, MatrixError> {
        let diff = self.sub(other)?;
        Ok(diff.frobenius_norm() / F::one().max(other.frobenius_norm()))
    }

    /// New matrix with entry `(i, j)` moved to `(row_perm[i], col_perm[j])`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self, MatrixError> {
        validate_permutation(row_perm, self.n_rows)?;
        validate_permutation(col_perm, self.n_cols)?;
        let mut values = vec![F::zero(); self.values.len()];
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                values[row_perm[i] * self.n_cols + col_perm[j]] = self.get(i, j);
            }
        }
        let mut out = Self::from_vec(self.n_rows, self.n_cols, values)?;
        out.row_labels = self
            .row_labels
            .as_ref()
            .map(|labels| permute_vec(labels, row_perm));
        out.col_labels = self
            .col_labels
            .as_ref()
            .map(|labels| permute_vec(labels, col_perm));
        Ok(out)
    }
}

fn permute_vec<T: Clone + Default>(items: &[T], perm: &[usize]) -> Vec<T> {
    let mut out = vec![T::default(); items.len()];
    for (i, item) in items.iter().enumerate() {
        out[perm[i]] = item.clone();
    }
    out
}

pub(crate) fn validate_permutation(perm: &[usize], len: usize) -> Result<(), MatrixError> {
    if perm.len() != len {
        return Err(MatrixError::BadPermutation { len });
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || seen[p] {
            return Err(MatrixError::BadPermutation { len });
        }
        seen[p] = true;
    }
    Ok(())
}

/// Boolean mask with the same addressing scheme as [`DenseMatrix`]. Used for
/// spike masks and sparse-recovery confusion counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<bool>,
}

impl BoolMatrix {
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![false; n_rows * n_cols],
        }
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::new(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.n_cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.data[row * self.n_cols + col] = value;
    }

    pub fn count_true(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Set entries as `(row, col)` pairs in row-major order.
    pub fn true_indices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                if self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self, MatrixError> {
        validate_permutation(row_perm, self.n_rows)?;
        validate_permutation(col_perm, self.n_cols)?;
        let mut out = Self::new(self.n_rows, self.n_cols);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out.set(row_perm[i], col_perm[j], self.get(i, j));
            }
        }
        Ok(out)
    }
}
