//! Dense linear algebra and seeded random streams.
//!
//! Everything here works on 64-bit floats in row-major storage. The
//! [`RngStream`] wraps a ChaCha8 generator so that a run is reproducible
//! from its seed alone.

use std::ops::{Index, IndexMut};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Relative pivot threshold for [`solve_linear`].
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Residual-norm threshold for [`orthonormalize_rows`].
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Dense row-major matrix of finite `f64` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
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

    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries cannot form a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some((index, &value)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { rows, cols, data })
    }

    /// Stacks equally sized rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    /// Builds a `dim x n` matrix whose columns are the given points.
    pub fn from_columns<R: AsRef<[f64]>>(columns: &[R]) -> Result<Self> {
        Ok(Self::from_rows(columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Columns as owned vectors (the sample layout used by the surrogates).
    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
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

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(l)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `A Aᵀ`, used to check row orthonormality.
    pub fn gram_rows(&self) -> Matrix {
        let mut g = Matrix::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..=i {
                let v = dot(self.row(i), self.row(j));
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }

    /// Largest entrywise deviation of `A Aᵀ` from the identity.
    pub fn row_orthonormality_error(&self) -> f64 {
        let g = self.gram_rows();
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.rows {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dot product with eight independent accumulators so the loop vectorizes.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0f64; 8];
    let (ac, bc) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f64 = ac
        .remainder()
        .iter()
        .zip(bc.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ac.zip(bc) {
        for l in 0..8 {
            acc[l] += x[l] * y[l];
        }
    }
    reduce8(acc) + tail
}

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0f64; 8];
    let (ac, bc) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f64 = ac
        .remainder()
        .iter()
        .zip(bc.remainder())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    for (x, y) in ac.zip(bc) {
        for l in 0..8 {
            let d = x[l] - y[l];
            acc[l] += d * d;
        }
    }
    reduce8(acc) + tail
}

#[inline]
fn reduce8(acc: [f64; 8]) -> f64 {
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]))
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `max_i |a_i - b_i|`.
pub fn inf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Solves `A x = b` by LU factorization with partial pivoting.
///
/// Fails with [`Error::SingularMatrix`] when a pivot drops below
/// `1e-12 * max |A_ij|`.
pub fn solve_linear(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Shape(format!(
            "solve_linear needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let threshold = PIVOT_TOLERANCE * a.max_abs();
    let mut lu = a.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    lu_in_place(&mut lu, n, threshold, &mut perm)?;

    // Forward substitution with the unit lower factor, then back substitution.
    let mut x: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
    for i in 1..n {
        let row = &lu[i * n..i * n + i];
        x[i] -= dot(row, &x[..i]);
    }
    for i in (0..n).rev() {
        let row = &lu[i * n..(i + 1) * n];
        let tail = dot(&row[i + 1..], &x[i + 1..]);
        x[i] = (x[i] - tail) / row[i];
    }
    Ok(x)
}

/// Panel width of the blocked factorization.
const LU_BLOCK: usize = 48;

/// Blocked right-looking LU with partial pivoting on a row-major `n x n`
/// buffer. On return `lu` holds `L` (unit diagonal, below) and `U`, and
/// `perm[i]` is the original row now at position `i`.
fn lu_in_place(lu: &mut [f64], n: usize, threshold: f64, perm: &mut [usize]) -> Result<()> {
    let mut k0 = 0;
    while k0 < n {
        let k1 = (k0 + LU_BLOCK).min(n);

        // Factor the panel of columns k0..k1, updating only those columns.
        for k in k0..k1 {
            let (pivot_row, pivot_abs) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot_abs.is_nan() || pivot_abs <= threshold {
                return Err(Error::SingularMatrix {
                    column: k,
                    pivot: pivot_abs,
                    threshold,
                });
            }
            if pivot_row != k {
                for j in 0..n {
                    lu.swap(k * n + j, pivot_row * n + j);
                }
                perm.swap(k, pivot_row);
            }
            let (upper, lower) = lu.split_at_mut((k + 1) * n);
            let pivot_seg = &upper[k * n + k..k * n + k1];
            let pivot = pivot_seg[0];
            for row in lower.chunks_exact_mut(n) {
                let factor = row[k] / pivot;
                row[k] = factor;
                if factor != 0.0 {
                    for (v, p) in row[k + 1..k1].iter_mut().zip(&pivot_seg[1..]) {
                        *v -= factor * p;
                    }
                }
            }
        }

        if k1 < n {
            // U12 = L11^-1 A12 (unit lower triangular solve, row by row).
            for i in k0 + 1..k1 {
                let (done, rest) = lu.split_at_mut(i * n);
                let row = &mut rest[..n];
                for p in k0..i {
                    let l = row[p];
                    if l != 0.0 {
                        let src = &done[p * n + k1..p * n + n];
                        for (v, s) in row[k1..].iter_mut().zip(src) {
                            *v -= l * s;
                        }
                    }
                }
            }
            // A22 -= L21 U12.
            let (top, bottom) = lu.split_at_mut(k1 * n);
            for row in bottom.chunks_exact_mut(n) {
                let (left, right) = row.split_at_mut(k1);
                for p in k0..k1 {
                    let l = left[p];
                    if l != 0.0 {
                        let src = &top[p * n + k1..p * n + n];
                        for (v, s) in right.iter_mut().zip(src) {
                            *v -= l * s;
                        }
                    }
                }
            }
        }
        k0 = k1;
    }
    Ok(())
}

/// Gram–Schmidt on the rows of a `k x d` matrix (`k <= d`).
///
/// Uses modified Gram–Schmidt with one re-orthogonalization pass per row,
/// which keeps `Q Qᵀ` within rounding of the identity even for `k = d`.
pub fn orthonormalize_rows(a: &Matrix) -> Result<Matrix> {
    let (k, d) = (a.rows(), a.cols());
    if k > d {
        return Err(Error::InvalidDims { k, d });
    }
    let mut q = a.clone();
    for i in 0..k {
        let original = norm(a.row(i));
        for _pass in 0..2 {
            for j in 0..i {
                let (done, rest) = q.data.split_at_mut(i * d);
                let basis = &done[j * d..(j + 1) * d];
                let row = &mut rest[..d];
                let c = dot(row, basis);
                for (v, b) in row.iter_mut().zip(basis) {
                    *v -= c * b;
                }
            }
        }
        let row = &mut q.data[i * d..(i + 1) * d];
        let residual = norm(row);
        if residual.is_nan() || residual <= RANK_TOLERANCE * original {
            return Err(Error::RankDeficient { row: i, residual });
        }
        row.iter_mut().for_each(|v| *v /= residual);
    }
    Ok(q)
}

/// Draws `count` i.i.d. standard normal variates.
pub fn gaussian_sample(rng: &mut RngStream, count: usize) -> Vec<f64> {
    (0..count).map(|_| rng.gaussian()).collect()
}

/// Seeded random stream. All randomness in the crate flows through here.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Independent stream seeded from this one.
    pub fn child(&mut self) -> RngStream {
        RngStream::new(self.next_u64())
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform in `[lo, hi)`; returns `lo` for an empty interval.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn gaussian(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: gaussian_sample(self, rows * cols),
        }
    }
}
