//! Dense real matrices, Householder QR, rank, LU and null-space bases.
//!
//! Vectors are single-column [`DenseMatrix`] values when they cross the public
//! API; internally plain `&[f64]` slices are used where it reads better.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Row-major dense matrix of finite `f64` values.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major data, rejecting bad lengths and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at ({}, {})",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    /// A single-column matrix.
    pub fn column_vector(values: &[f64]) -> Result<Self> {
        Self::new(values.len(), 1, values.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Row-major entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product with a plain slice.
    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Columns `indices`, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, indices.len());
        for i in 0..self.rows {
            for (c, &j) in indices.iter().enumerate() {
                out[(i, c)] = self[(i, j)];
            }
        }
        out
    }

    /// Rows `indices`, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_block(&self, start: usize, end: usize) -> Self {
        let idx: Vec<usize> = (start..end).collect();
        self.select_columns(&idx)
    }

    /// Largest absolute entrywise difference; `None` when the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.shape() != other.shape() {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .fold(0.0, |m, (a, b)| m.max((a - b).abs())),
        )
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `(‖v‖₁, ‖v‖∞)` of a slice.
pub fn l1_linf(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((0.0, 0.0), |(s, m), x| (s + x.abs(), f64::max(m, x.abs())))
}

/// `(‖v‖₁, ‖v‖∞)` of a single-column matrix.
pub fn vector_norms(v: &DenseMatrix) -> Result<(f64, f64)> {
    if v.cols() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected a single column, got {} columns",
            v.cols()
        )));
    }
    Ok(l1_linf(v.data()))
}

/// Householder QR: `M = Q R` with `Q` square orthogonal and `R` upper trapezoidal.
pub fn qr_decompose(m: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    ensure_finite(m)?;
    let (rows, cols) = m.shape();
    let mut r = m.clone();
    let mut q = DenseMatrix::identity(rows);
    let mut v = vec![0.0; rows];

    for j in 0..cols.min(rows.saturating_sub(1)) {
        let tail: f64 = (j + 1..rows).map(|i| r[(i, j)] * r[(i, j)]).sum();
        if tail == 0.0 {
            continue;
        }
        let head = r[(j, j)];
        let norm = (head * head + tail).sqrt();
        let alpha = if head >= 0.0 { -norm } else { norm };

        let len = rows - j;
        v[0] = head - alpha;
        for i in 1..len {
            v[i] = r[(j + i, j)];
        }
        let vnorm = norm2(&v[..len]);
        for x in &mut v[..len] {
            *x /= vnorm;
        }

        // R <- H R on the trailing block
        for c in j..cols {
            let s: f64 = (0..len).map(|i| v[i] * r[(j + i, c)]).sum();
            for i in 0..len {
                r[(j + i, c)] -= 2.0 * s * v[i];
            }
        }
        r[(j, j)] = alpha;
        for i in j + 1..rows {
            r[(i, j)] = 0.0;
        }

        // Q <- Q H
        for row in 0..rows {
            let s: f64 = (0..len).map(|i| q[(row, j + i)] * v[i]).sum();
            for i in 0..len {
                q[(row, j + i)] -= 2.0 * s * v[i];
            }
        }
    }
    Ok((q, r))
}

/// Numerical rank from Householder QR with column pivoting.
///
/// A pivot counts when it exceeds `tol * max(1, |R₁₁|)`.
pub fn rank(m: &DenseMatrix, tol: f64) -> Result<usize> {
    ensure_finite(m)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidMatrix(format!(
            "rank tolerance must be positive, got {tol}"
        )));
    }
    let (rows, cols) = m.shape();
    let mut r = m.clone();
    let steps = rows.min(cols);
    let mut diag = Vec::with_capacity(steps);

    for j in 0..steps {
        // pivot: remaining column with largest trailing norm
        let mut best = j;
        let mut best_norm = -1.0;
        for c in j..cols {
            let nrm: f64 = (j..rows).map(|i| r[(i, c)] * r[(i, c)]).sum();
            if nrm > best_norm {
                best_norm = nrm;
                best = c;
            }
        }
        if best != j {
            for i in 0..rows {
                r.data.swap(i * cols + j, i * cols + best);
            }
        }
        let norm = best_norm.sqrt();
        if norm == 0.0 {
            diag.push(0.0);
            continue;
        }
        let head = r[(j, j)];
        let alpha = if head >= 0.0 { -norm } else { norm };
        let len = rows - j;
        let mut v: Vec<f64> = (0..len).map(|i| r[(j + i, j)]).collect();
        v[0] -= alpha;
        let vnorm = norm2(&v);
        if vnorm > 0.0 {
            for x in &mut v {
                *x /= vnorm;
            }
            for c in j..cols {
                let s: f64 = (0..len).map(|i| v[i] * r[(j + i, c)]).sum();
                for i in 0..len {
                    r[(j + i, c)] -= 2.0 * s * v[i];
                }
            }
        }
        diag.push(r[(j, j)].abs());
    }

    let scale = diag.first().copied().unwrap_or(0.0).max(1.0);
    Ok(diag.iter().filter(|&&d| d > tol * scale).count())
}

/// Orthonormal basis of `null(A)` for an underdetermined full-row-rank `A`.
///
/// Columns of `basis` span the null space; `basis` plays the role of `Bᵀ`
/// in the balancedness and width computations. The source matrix is kept so
/// decoders can rebuild measurements from null-space witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct NullSpaceBasis {
    n: usize,
    p: usize,
    basis: DenseMatrix,
    source_tol: f64,
    source: DenseMatrix,
}

impl NullSpaceBasis {
    /// Ambient dimension (columns of `A`).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Null-space dimension.
    pub fn p(&self) -> usize {
        self.p
    }

    /// The `n×p` basis matrix.
    pub fn matrix(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn source_tol(&self) -> f64 {
        self.source_tol
    }

    /// The measurement matrix the basis was built from.
    pub fn source(&self) -> &DenseMatrix {
        &self.source
    }

    /// `N x` for a coefficient vector of length `p`.
    pub fn combine(&self, x: &[f64]) -> Vec<f64> {
        self.basis.mul_vec(x).expect("coefficient length equals p")
    }

    /// Replaces the basis by `N Q` for an orthogonal `p×p` matrix `Q`.
    ///
    /// Used to check that downstream quantities do not depend on the basis.
    pub fn rotated(&self, q: &DenseMatrix) -> Result<Self> {
        if q.shape() != (self.p, self.p) {
            return Err(Error::DimensionMismatch(format!(
                "rotation must be {}x{}, got {}x{}",
                self.p,
                self.p,
                q.rows(),
                q.cols()
            )));
        }
        Ok(Self {
            basis: self.basis.matmul(q)?,
            ..self.clone()
        })
    }
}

/// Null-space basis from the trailing columns of the full Householder `Q` of `Aᵀ`.
pub fn null_space_basis(a: &DenseMatrix, tol: f64) -> Result<NullSpaceBasis> {
    ensure_finite(a)?;
    let (m, n) = a.shape();
    if m == 0 || m >= n {
        return Err(Error::NotUnderdetermined { rows: m, cols: n });
    }
    let r = rank(a, tol)?;
    if r < m {
        return Err(Error::RankDeficient {
            rank: r,
            expected: m,
        });
    }
    let (q, _) = qr_decompose(&a.transpose())?;
    Ok(NullSpaceBasis {
        n,
        p: n - m,
        basis: q.column_block(m, n),
        source_tol: tol,
        source: a.clone(),
    })
}

/// LU factorization with partial pivoting of a square matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        let n = m.rows();
        if m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "LU needs a square matrix, got {}x{}",
                n,
                m.cols()
            )));
        }
        let mut lu = m.data().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = m.max_abs().max(1e-300);
        for k in 0..n {
            let (piv, piv_abs) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if piv_abs <= 1e-14 * scale {
                return Err(Error::Singular(k));
            }
            if piv != k {
                for c in 0..n {
                    lu.swap(k * n + c, piv * n + c);
                }
                perm.swap(k, piv);
            }
            let d = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / d;
                lu[i * n + k] = f;
                if f != 0.0 {
                    for c in k + 1..n {
                        lu[i * n + c] -= f * lu[k * n + c];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    /// Solves `M x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.lu[i * n + k] * x[k]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| self.lu[i * n + k] * x[k]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }

    /// Solves `Mᵀ y = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut w = b.to_vec();
        // Uᵀ z = b
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.lu[k * n + i] * w[k]).sum();
            w[i] = (w[i] - s) / self.lu[i * n + i];
        }
        // Lᵀ w = z
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| self.lu[k * n + i] * w[k]).sum();
            w[i] -= s;
        }
        let mut y = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            y[p] = w[i];
        }
        y
    }
}

/// Least-squares solution of a tall full-column-rank system via Householder QR.
///
/// Returns `None` when the columns are numerically dependent.
pub(crate) fn least_squares(a: &DenseMatrix, y: &[f64]) -> Result<Option<Vec<f64>>> {
    let (m, k) = a.shape();
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    if k > m {
        return Ok(None);
    }
    let (q, r) = qr_decompose(a)?;
    let scale = (0..k).fold(0.0f64, |s, i| s.max(r[(i, i)].abs())).max(1.0);
    if (0..k).any(|i| r[(i, i)].abs() <= DEFAULT_RANK_TOL * scale) {
        return Ok(None);
    }
    let qty: Vec<f64> = (0..k)
        .map(|j| (0..m).map(|i| q[(i, j)] * y[i]).sum())
        .collect();
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|c| r[(i, c)] * x[c]).sum();
        x[i] = (qty[i] - s) / r[(i, i)];
    }
    Ok(Some(x))
}

fn ensure_finite(m: &DenseMatrix) -> Result<()> {
    match m.data().iter().position(|v| !v.is_finite()) {
        Some(pos) => Err(Error::InvalidMatrix(format!(
            "non-finite entry at flat index {pos}"
        ))),
        None => Ok(()),
    }
}
