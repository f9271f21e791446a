//! Random orthonormal projections and the projected RBF ensemble.
//!
//! An ensemble holds `m` pairs `(Pᵢ, f̂ᵢ)`: each `Pᵢ` is a `k x d` matrix
//! with orthonormal rows and each `f̂ᵢ` is an RBF trained on the shared
//! samples mapped through `Pᵢ`. The ensemble predicts `(1/m) Σ f̂ᵢ(Pᵢ x)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{orthonormalize_rows, squared_distance, Matrix, RngStream};
use crate::surrogate::{train_rbf_points, RbfModel, Surrogate, TrainingSet};

const MAX_DRAWS: usize = 3;

/// A `k x d` matrix with orthonormal rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    matrix: Matrix,
    /// `Pᵀ`, so that `P x` accumulates contiguous rows.
    transposed: Matrix,
}

impl ProjectionMatrix {
    /// Wraps an existing matrix after checking `P Pᵀ = I` within 1e-10.
    pub fn from_matrix(matrix: Matrix) -> Result<Self> {
        if matrix.rows() > matrix.cols() {
            return Err(Error::InvalidDims {
                k: matrix.rows(),
                d: matrix.cols(),
            });
        }
        let err = matrix.row_orthonormality_error();
        if err > 1e-10 {
            return Err(Error::DegenerateInput(format!(
                "projection rows are not orthonormal (max |P Pᵀ - I| = {err:e})"
            )));
        }
        Ok(Self::new(matrix))
    }

    fn new(matrix: Matrix) -> Self {
        Self {
            transposed: matrix.transpose(),
            matrix,
        }
    }

    /// The first `k` rows of the `d x d` identity: plain coordinate selection.
    pub fn coordinate(k: usize, d: usize) -> Result<Self> {
        if k == 0 || k > d {
            return Err(Error::InvalidDims { k, d });
        }
        let mut matrix = Matrix::zeros(k, d);
        for i in 0..k {
            matrix[(i, i)] = 1.0;
        }
        Ok(Self::new(matrix))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn d(&self) -> usize {
        self.matrix.cols()
    }

    pub fn project_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                got: x.len(),
            });
        }
        let mut out = vec![0.0; self.k()];
        self.project_into(x, &mut out);
        Ok(out)
    }

    fn project_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (j, &xj) in x.iter().enumerate() {
            for (o, &p) in out.iter_mut().zip(self.transposed.row(j)) {
                *o += xj * p;
            }
        }
    }
}

/// Draws a Gaussian `k x d` matrix and orthonormalizes its rows.
///
/// This is the transpose of orthonormalizing the `k` columns of a `d x k`
/// Gaussian matrix. A rank-deficient draw is retried up to 3 times.
pub fn generate_projection(k: usize, d: usize, rng: &mut RngStream) -> Result<ProjectionMatrix> {
    if k == 0 || k > d {
        return Err(Error::InvalidDims { k, d });
    }
    let mut last = None;
    for _ in 0..MAX_DRAWS {
        match orthonormalize_rows(&rng.gaussian_matrix(k, d)) {
            Ok(matrix) => return Ok(ProjectionMatrix::new(matrix)),
            Err(e @ Error::RankDeficient { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("loop ran"))
}

/// `X' = P X` for a `d x n` sample matrix.
pub fn project(p: &ProjectionMatrix, x: &Matrix) -> Result<Matrix> {
    if x.rows() != p.d() {
        return Err(Error::DimensionMismatch {
            expected: p.d(),
            got: x.rows(),
        });
    }
    p.matrix.matmul(x)
}

/// Pairwise squared-distance ratios under a projection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistortionReport {
    /// One ratio per pair `i < j`, in lexicographic pair order.
    pub ratios: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// `max |ratio - 1|`; the empirical ε of the distance-preservation bound.
    pub epsilon: f64,
    pub scale_corrected: bool,
}

impl DistortionReport {
    pub fn fraction_within(&self, lo: f64, hi: f64) -> f64 {
        let inside = self
            .ratios
            .iter()
            .filter(|r| **r >= lo && **r <= hi)
            .count();
        inside as f64 / self.ratios.len() as f64
    }
}

/// Ratio `‖Pxᵢ − Pxⱼ‖² / ‖xᵢ − xⱼ‖²` over all column pairs of `x`,
/// optionally multiplied by `d/k`.
pub fn jl_distortion(
    p: &ProjectionMatrix,
    x: &Matrix,
    scale_correction: bool,
) -> Result<DistortionReport> {
    if x.cols() < 2 {
        return Err(Error::DegenerateInput(format!(
            "need at least 2 points, got {}",
            x.cols()
        )));
    }
    let projected = project(p, x)?.columns();
    let original = x.columns();
    let scale = if scale_correction {
        p.d() as f64 / p.k() as f64
    } else {
        1.0
    };
    let n = original.len();
    let mut ratios = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let denom = squared_distance(&original[i], &original[j]);
            if denom == 0.0 {
                return Err(Error::DegenerateInput(format!(
                    "columns {i} and {j} are identical"
                )));
            }
            ratios.push(scale * squared_distance(&projected[i], &projected[j]) / denom);
        }
    }
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let epsilon = ratios.iter().fold(0.0f64, |m, r| m.max((r - 1.0).abs()));
    Ok(DistortionReport {
        ratios,
        min,
        max,
        mean,
        epsilon,
        scale_corrected: scale_correction,
    })
}

/// How ensemble members obtain their projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionKind {
    /// Orthonormalized Gaussian matrices.
    #[default]
    Gaussian,
    /// Coordinate selection (`k = d` gives the identity); a test hook that
    /// reduces the ensemble to a plain RBF.
    Identity,
}

/// One `(Pᵢ, f̂ᵢ)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMember {
    pub projection: ProjectionMatrix,
    pub model: RbfModel,
}

impl EnsembleMember {
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.model.predict(&self.projection.project_point(x)?)
    }
}

/// Average of RBF models trained in random subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct RpRbfEnsemble {
    members: Vec<EnsembleMember>,
    dim: usize,
}

impl RpRbfEnsemble {
    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn m(&self) -> usize {
        self.members.len()
    }

    pub fn subspace_dim(&self) -> usize {
        self.members[0].projection.k()
    }
}

impl Surrogate for RpRbfEnsemble {
    fn dim(&self) -> usize {
        self.dim
    }

    fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let mut buf = vec![0.0; self.subspace_dim()];
        let sum: f64 = self
            .members
            .iter()
            .map(|member| {
                member.projection.project_into(x, &mut buf);
                member.model.predict_unchecked(&buf)
            })
            .sum();
        sum / self.members.len() as f64
    }
}

/// `(1/m) Σ f̂ᵢ(Pᵢ x)`, summed in member order.
pub fn predict_ensemble(ens: &RpRbfEnsemble, x: &[f64]) -> Result<f64> {
    ens.predict(x)
}

/// Builds an ensemble of `m` RBFs in random `k`-dimensional subspaces.
pub fn build_rp_rbf(
    data: &TrainingSet,
    k: usize,
    m: usize,
    rng: &mut RngStream,
) -> Result<RpRbfEnsemble> {
    build_rp_rbf_with(data, k, m, ProjectionKind::Gaussian, rng)
}

/// [`build_rp_rbf`] with a choice of projection source.
///
/// One child seed per member is drawn from `rng` before any training, so
/// members can be trained in parallel without changing the result.
pub fn build_rp_rbf_with(
    data: &TrainingSet,
    k: usize,
    m: usize,
    kind: ProjectionKind,
    rng: &mut RngStream,
) -> Result<RpRbfEnsemble> {
    let d = data.dim();
    if k == 0 || k > d {
        return Err(Error::InvalidDims { k, d });
    }
    if m == 0 {
        return Err(Error::InvalidConfig("ensemble needs m >= 1".into()));
    }
    let seeds: Vec<u64> = (0..m).map(|_| rng.next_u64()).collect();
    let members = seeds
        .into_par_iter()
        .enumerate()
        .map(|(index, seed)| {
            build_member(data, k, kind, seed).map_err(|source| Error::EnsembleMember {
                index,
                source: Box::new(source),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RpRbfEnsemble { members, dim: d })
}

fn build_member(
    data: &TrainingSet,
    k: usize,
    kind: ProjectionKind,
    seed: u64,
) -> Result<EnsembleMember> {
    let projection = match kind {
        ProjectionKind::Gaussian => generate_projection(k, data.dim(), &mut RngStream::new(seed))?,
        ProjectionKind::Identity => ProjectionMatrix::coordinate(k, data.dim())?,
    };
    let projected = project(&projection, data.samples())?;
    let model = train_rbf_points(&projected.columns(), data.fitness())?;
    Ok(EnsembleMember { projection, model })
}
