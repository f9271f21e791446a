//! Benchmark problems F1–F6 with a real-evaluation counter.
//!
//! F1–F4 are the classic closed forms (Ellipsoid, Rosenbrock, Ackley,
//! Griewank). F5 is a shifted rotated Rastrigin with bias −330 and F6 a
//! rotated hybrid composition with bias 10; their shift and rotation data
//! are generated from a seed rather than loaded from data files.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{orthonormalize_rows, squared_distance, Matrix, RngStream};
use crate::space::Bounds;

const RASTRIGIN_A: f64 = 10.0;
const F5_BIAS: f64 = -330.0;
const F6_BIAS: f64 = 10.0;
const COMPOSITION_C: f64 = 2000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProblemId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
}

impl ProblemId {
    pub const ALL: [ProblemId; 6] = [
        ProblemId::F1,
        ProblemId::F2,
        ProblemId::F3,
        ProblemId::F4,
        ProblemId::F5,
        ProblemId::F6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::F1 => "Ellipsoid",
            ProblemId::F2 => "Rosenbrock",
            ProblemId::F3 => "Ackley",
            ProblemId::F4 => "Griewank",
            ProblemId::F5 => "Shifted Rotated Rastrigin",
            ProblemId::F6 => "Rotated Hybrid Composition",
        }
    }

    /// Conventional search interval, applied in every dimension.
    pub fn default_interval(self) -> (f64, f64) {
        match self {
            ProblemId::F1 => (-5.12, 5.12),
            ProblemId::F2 => (-2.048, 2.048),
            ProblemId::F3 => (-32.768, 32.768),
            ProblemId::F4 => (-600.0, 600.0),
            ProblemId::F5 | ProblemId::F6 => (-5.0, 5.0),
        }
    }

    pub fn optimum_value(self) -> f64 {
        match self {
            ProblemId::F5 => F5_BIAS,
            ProblemId::F6 => F6_BIAS,
            _ => 0.0,
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "F1" => Ok(ProblemId::F1),
            "F2" => Ok(ProblemId::F2),
            "F3" => Ok(ProblemId::F3),
            "F4" => Ok(ProblemId::F4),
            "F5" => Ok(ProblemId::F5),
            "F6" => Ok(ProblemId::F6),
            _ => Err(Error::UnknownProblem(s.to_string())),
        }
    }
}

/// Everything needed to rebuild a [`Problem`] instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDescriptor {
    pub id: ProblemId,
    pub dim: usize,
    pub data_seed: u64,
    pub bounds: Bounds,
}

impl ProblemDescriptor {
    pub fn build(&self) -> Result<Problem> {
        make_problem_in(self.id, self.dim, self.data_seed, self.bounds.clone())
    }
}

// Basic functions, each with minimum 0 at the origin (Rosenbrock at 1).

pub fn ellipsoid(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (i + 1) as f64 * v * v)
        .sum()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

pub fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / d;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    sum - prod + 1.0
}

pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - RASTRIGIN_A * (2.0 * PI * v).cos() + RASTRIGIN_A)
        .sum()
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BasicFunction {
    Rastrigin,
    Rosenbrock,
    Griewank,
    Ackley,
    Sphere,
}

impl BasicFunction {
    fn eval(self, z: &[f64]) -> f64 {
        match self {
            BasicFunction::Rastrigin => rastrigin(z),
            // Shifted so that z = 0 is optimal like the other components.
            BasicFunction::Rosenbrock => {
                let shifted: Vec<f64> = z.iter().map(|v| v + 1.0).collect();
                rosenbrock(&shifted)
            }
            BasicFunction::Griewank => griewank(z),
            BasicFunction::Ackley => ackley(z),
            BasicFunction::Sphere => sphere(z),
        }
    }
}

/// Ten-component composition in the CEC2005 style.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    kinds: Vec<BasicFunction>,
    shifts: Vec<Vec<f64>>,
    rotations: Vec<Matrix>,
    lambdas: Vec<f64>,
    sigmas: Vec<f64>,
    biases: Vec<f64>,
    fmax: Vec<f64>,
}

impl Composition {
    fn generate(dim: usize, bounds: &Bounds, rng: &mut RngStream) -> Result<Self> {
        use BasicFunction::*;
        let kinds = vec![
            Rastrigin, Rastrigin, Rosenbrock, Rosenbrock, Griewank, Griewank, Ackley, Ackley,
            Sphere, Sphere,
        ];
        let lambdas = vec![
            1.0,
            1.0,
            10.0,
            10.0,
            5.0 / 60.0,
            5.0 / 60.0,
            5.0 / 32.0,
            5.0 / 32.0,
            5.0 / 100.0,
            5.0 / 100.0,
        ];
        let mut shifts = Vec::with_capacity(kinds.len());
        let mut rotations = Vec::with_capacity(kinds.len());
        for _ in &kinds {
            shifts.push(central_shift(bounds, rng));
            rotations.push(random_rotation(dim, rng)?);
        }
        let probe = vec![5.0; dim];
        let fmax = kinds
            .iter()
            .zip(&rotations)
            .zip(&lambdas)
            .map(|((kind, rot), lambda)| {
                let scaled: Vec<f64> = probe.iter().map(|v| v / lambda).collect();
                Ok(kind.eval(&rot.mul_vec(&scaled)?).abs())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            sigmas: vec![1.0; kinds.len()],
            biases: (0..kinds.len()).map(|i| 100.0 * i as f64).collect(),
            kinds,
            shifts,
            rotations,
            lambdas,
            fmax,
        })
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let d = x.len() as f64;
        let mut weights: Vec<f64> = self
            .shifts
            .iter()
            .zip(&self.sigmas)
            .map(|(o, s)| (-squared_distance(x, o) / (2.0 * d * s * s)).exp())
            .collect();
        let wmax = weights.iter().copied().fold(0.0, f64::max);
        for w in weights.iter_mut() {
            if *w != wmax {
                *w *= 1.0 - wmax.powi(10);
            }
        }
        let total: f64 = weights.iter().sum();
        if total > 0.0 {
            weights.iter_mut().for_each(|w| *w /= total);
        } else {
            let n = weights.len() as f64;
            weights.iter_mut().for_each(|w| *w = 1.0 / n);
        }

        let mut value = 0.0;
        let mut z = vec![0.0; x.len()];
        let mut buf = vec![0.0; x.len()];
        for (i, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for ((b, xv), ov) in buf.iter_mut().zip(x).zip(&self.shifts[i]) {
                *b = (xv - ov) / self.lambdas[i];
            }
            for (r, zr) in z.iter_mut().enumerate() {
                *zr = crate::numerics::dot(self.rotations[i].row(r), &buf);
            }
            let fit = COMPOSITION_C * self.kinds[i].eval(&z) / self.fmax[i];
            value += w * (fit + self.biases[i]);
        }
        value + F6_BIAS
    }
}

/// A benchmark instance. Every call to [`Problem::evaluate`] counts as one
/// real (expensive) function evaluation.
#[derive(Debug, Clone)]
pub struct Problem {
    id: ProblemId,
    dim: usize,
    data_seed: u64,
    bounds: Bounds,
    shift: Option<Vec<f64>>,
    rotation: Option<Matrix>,
    composition: Option<Composition>,
    eval_count: u64,
}

impl Problem {
    pub fn id(&self) -> ProblemId {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data_seed(&self) -> u64 {
        self.data_seed
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn optimum_value(&self) -> f64 {
        self.id.optimum_value()
    }

    pub fn shift(&self) -> Option<&[f64]> {
        self.shift.as_deref()
    }

    pub fn rotation(&self) -> Option<&Matrix> {
        self.rotation.as_ref()
    }

    pub fn eval_count(&self) -> u64 {
        self.eval_count
    }

    pub fn reset_count(&mut self) {
        self.eval_count = 0;
    }

    pub fn descriptor(&self) -> ProblemDescriptor {
        ProblemDescriptor {
            id: self.id,
            dim: self.dim,
            data_seed: self.data_seed,
            bounds: self.bounds.clone(),
        }
    }

    /// A point attaining [`Problem::optimum_value`].
    pub fn known_optimizer(&self) -> Vec<f64> {
        match self.id {
            ProblemId::F1 | ProblemId::F3 | ProblemId::F4 => vec![0.0; self.dim],
            ProblemId::F2 => vec![1.0; self.dim],
            ProblemId::F5 => self.shift.clone().expect("F5 has a shift"),
            ProblemId::F6 => {
                self.composition.as_ref().expect("F6 has components").shifts[0].clone()
            }
        }
    }

    /// One real evaluation; increments the counter.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        let v = self.evaluate_uncounted(x)?;
        self.eval_count += 1;
        Ok(v)
    }

    /// The objective value without touching the counter. For analysis only
    /// (accuracy probes, tests); optimizers must use [`Problem::evaluate`].
    pub fn evaluate_uncounted(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(match self.id {
            ProblemId::F1 => ellipsoid(x),
            ProblemId::F2 => rosenbrock(x),
            ProblemId::F3 => ackley(x),
            ProblemId::F4 => griewank(x),
            ProblemId::F5 => {
                let shift = self.shift.as_ref().expect("F5 has a shift");
                let diff: Vec<f64> = x.iter().zip(shift).map(|(a, b)| a - b).collect();
                let z = self
                    .rotation
                    .as_ref()
                    .expect("F5 has a rotation")
                    .mul_vec(&diff)?;
                rastrigin(&z) + F5_BIAS
            }
            ProblemId::F6 => self
                .composition
                .as_ref()
                .expect("F6 has components")
                .eval(x),
        })
    }
}

/// Uniform draw inside the central 80% of the box.
fn central_shift(bounds: &Bounds, rng: &mut RngStream) -> Vec<f64> {
    bounds
        .lower
        .iter()
        .zip(&bounds.upper)
        .map(|(&lo, &hi)| {
            let margin = 0.1 * (hi - lo);
            rng.uniform_in(lo + margin, hi - margin)
        })
        .collect()
}

fn random_rotation(dim: usize, rng: &mut RngStream) -> Result<Matrix> {
    orthonormalize_rows(&rng.gaussian_matrix(dim, dim))
}

/// Builds problem `id` in `dim` dimensions on its conventional domain.
pub fn make_problem(id: ProblemId, dim: usize, data_seed: u64) -> Result<Problem> {
    let (lo, hi) = id.default_interval();
    make_problem_in(id, dim, data_seed, Bounds::uniform(dim, lo, hi)?)
}

/// Builds problem `id` on a caller-chosen box.
pub fn make_problem_in(
    id: ProblemId,
    dim: usize,
    data_seed: u64,
    bounds: Bounds,
) -> Result<Problem> {
    if dim < 2 {
        return Err(Error::InvalidConfig(format!(
            "benchmark dimension must be at least 2, got {dim}"
        )));
    }
    if bounds.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bounds.dim(),
        });
    }
    bounds.validate()?;
    let mut rng = RngStream::new(data_seed);
    let (shift, rotation, composition) = match id {
        ProblemId::F5 => {
            let shift = central_shift(&bounds, &mut rng);
            let rotation = random_rotation(dim, &mut rng)?;
            (Some(shift), Some(rotation), None)
        }
        ProblemId::F6 => (
            None,
            None,
            Some(Composition::generate(dim, &bounds, &mut rng)?),
        ),
        _ => (None, None, None),
    };
    Ok(Problem {
        id,
        dim,
        data_seed,
        bounds,
        shift,
        rotation,
        composition,
        eval_count: 0,
    })
}
