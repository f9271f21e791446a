//! Interpolating radial-basis-function models with a multiquadric kernel.
//!
//! A model is `f̂(x) = Σ ωᵢ φ(‖x − xᵢ‖)` with `φ(r) = √(r² + 1)`; the
//! weights solve `Φ ω = f` where `Φᵢⱼ = φ(‖xᵢ − xⱼ‖)`.

use crate::error::{Error, Result};
use crate::numerics::{dot, inf_distance, solve_linear, squared_distance, Matrix};

/// Shape constant `c` of the multiquadric kernel.
pub const BASIS_BIAS: f64 = 1.0;

/// Two samples closer than this in the ∞-norm are treated as one.
pub const DUPLICATE_TOLERANCE: f64 = 1e-12;

/// Diagonal jitter, relative to `trace(Φ)/n`, tried once when `Φ` is singular.
pub const JITTER: f64 = 1e-8;

/// `√(r² + c²)` with `c = 1`.
#[inline]
pub fn multiquadric(r: f64) -> f64 {
    (r * r + BASIS_BIAS * BASIS_BIAS).sqrt()
}

#[inline]
fn multiquadric_sq(r2: f64) -> f64 {
    (r2 + BASIS_BIAS * BASIS_BIAS).sqrt()
}

/// Anything that maps a position to a predicted fitness.
pub trait Surrogate {
    fn dim(&self) -> usize;

    /// Prediction without the dimension check.
    fn predict_unchecked(&self, x: &[f64]) -> f64;

    fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.predict_unchecked(x))
    }
}

/// Samples (as the columns of a `d x n` matrix) and their true fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    samples: Matrix,
    fitness: Vec<f64>,
}

impl TrainingSet {
    pub fn new(samples: Matrix, fitness: Vec<f64>) -> Result<Self> {
        if samples.cols() != fitness.len() {
            return Err(Error::DimensionMismatch {
                expected: samples.cols(),
                got: fitness.len(),
            });
        }
        if samples.cols() < 2 {
            return Err(Error::DegenerateTrainingSet {
                distinct: samples.cols(),
            });
        }
        if let Some((index, &value)) = fitness.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { samples, fitness })
    }

    /// Builds the set from one position per sample.
    pub fn from_points<P: AsRef<[f64]>>(points: &[P], fitness: Vec<f64>) -> Result<Self> {
        Self::new(Matrix::from_columns(points)?, fitness)
    }

    pub fn samples(&self) -> &Matrix {
        &self.samples
    }

    pub fn fitness(&self) -> &[f64] {
        &self.fitness
    }

    pub fn dim(&self) -> usize {
        self.samples.rows()
    }

    pub fn len(&self) -> usize {
        self.samples.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.samples.columns()
    }
}

/// A trained multiquadric interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct RbfModel {
    /// `n x dim` row-major.
    centers: Vec<f64>,
    /// `dim x n` row-major: coordinate `l` of every center is contiguous.
    centers_t: Vec<f64>,
    weights: Vec<f64>,
    dim: usize,
}

impl RbfModel {
    pub fn centers(&self) -> impl Iterator<Item = &[f64]> {
        self.centers.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn basis_bias(&self) -> f64 {
        BASIS_BIAS
    }
}

impl Surrogate for RbfModel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let n = self.weights.len();
        let mut r2 = vec![0.0; n];
        for (&xl, coords) in x.iter().zip(self.centers_t.chunks_exact(n)) {
            for (acc, &c) in r2.iter_mut().zip(coords) {
                let d = xl - c;
                *acc += d * d;
            }
        }
        r2.iter_mut().for_each(|v| *v = multiquadric_sq(*v));
        dot(&r2, &self.weights)
    }
}

/// Trains an interpolating RBF on `data`.
///
/// Duplicate samples (∞-distance below [`DUPLICATE_TOLERANCE`]) are dropped,
/// keeping the first occurrence. A singular Gram matrix gets one retry with
/// diagonal jitter before [`Error::SingularGram`] is returned.
pub fn train_rbf(data: &TrainingSet) -> Result<RbfModel> {
    let points = data.points();
    train_rbf_points(&points, data.fitness())
}

pub(crate) fn train_rbf_points<P: AsRef<[f64]>>(points: &[P], fitness: &[f64]) -> Result<RbfModel> {
    let mut centers: Vec<&[f64]> = Vec::with_capacity(points.len());
    let mut values = Vec::with_capacity(points.len());
    for (p, &f) in points.iter().zip(fitness) {
        let p = p.as_ref();
        if centers
            .iter()
            .all(|c| inf_distance(c, p) >= DUPLICATE_TOLERANCE)
        {
            centers.push(p);
            values.push(f);
        }
    }
    let n = centers.len();
    if n < 2 {
        return Err(Error::DegenerateTrainingSet { distinct: n });
    }

    let mut gram = Matrix::zeros(n, n);
    for i in 0..n {
        gram[(i, i)] = multiquadric(0.0);
        for j in 0..i {
            let v = multiquadric_sq(squared_distance(centers[i], centers[j]));
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
    }
    train_rbf_with_gram(&centers, &values, &gram)
}

/// Fits weights for pairwise-distinct `centers` whose Gram matrix is given.
pub(crate) fn train_rbf_with_gram(
    centers: &[&[f64]],
    values: &[f64],
    gram: &Matrix,
) -> Result<RbfModel> {
    let n = centers.len();
    let dim = centers.first().map_or(0, |c| c.len());
    let weights = match solve_linear(gram, values) {
        Ok(w) => w,
        Err(Error::SingularMatrix { .. }) => {
            let mut gram = gram.clone();
            let trace: f64 = (0..n).map(|i| gram[(i, i)]).sum();
            let jitter = JITTER * trace / n as f64;
            for i in 0..n {
                gram[(i, i)] += jitter;
            }
            solve_linear(&gram, values).map_err(|e| match e {
                Error::SingularMatrix { .. } => Error::SingularGram,
                other => other,
            })?
        }
        Err(e) => return Err(e),
    };

    let mut centers_t = vec![0.0; n * dim];
    for (i, c) in centers.iter().enumerate() {
        for (l, &v) in c.iter().enumerate() {
            centers_t[l * n + i] = v;
        }
    }
    Ok(RbfModel {
        centers: centers.iter().flat_map(|c| c.iter().copied()).collect(),
        centers_t,
        weights,
        dim,
    })
}

/// Multiquadric Gram matrix of `points`, extended in place as points are appended.
#[derive(Debug, Clone, Default)]
pub(crate) struct GramCache {
    size: usize,
    entries: Vec<f64>,
}

impl GramCache {
    /// Gram matrix of all `points`; the first `size` points must be unchanged
    /// since the previous call.
    pub(crate) fn update(&mut self, points: &[&[f64]]) -> Matrix {
        let n = points.len();
        let old = self.size;
        let mut entries = vec![0.0; n * n];
        for i in 0..old.min(n) {
            entries[i * n..i * n + old].copy_from_slice(&self.entries[i * old..(i + 1) * old]);
        }
        for i in old..n {
            entries[i * n + i] = multiquadric(0.0);
            for j in 0..i {
                let v = multiquadric_sq(squared_distance(points[i], points[j]));
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        self.size = n;
        self.entries = entries;
        Matrix::from_row_major(n, n, self.entries.clone()).expect("finite distances")
    }
}
