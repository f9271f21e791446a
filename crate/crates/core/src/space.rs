//! Box-constrained decision spaces and evaluated points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RngStream;

/// Axis-aligned box `[lower_i, upper_i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    /// Checked constructor; requires `lower_i < upper_i` in every dimension.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        let b = Self { lower, upper };
        b.validate()?;
        Ok(b)
    }

    /// The same interval in every one of `dim` dimensions.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn validate(&self) -> Result<()> {
        for (dim, (&lower, &upper)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(lower.is_finite() && upper.is_finite() && lower < upper) {
                return Err(Error::InvalidBounds { dim, lower, upper });
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// Smallest box holding all `points`, intersected with `self`.
    ///
    /// The result may be flat (`lower_i == upper_i`) in some dimensions.
    pub fn bounding_box_within(&self, points: &[&[f64]]) -> Bounds {
        let mut lower = vec![f64::INFINITY; self.dim()];
        let mut upper = vec![f64::NEG_INFINITY; self.dim()];
        for p in points {
            for (j, &v) in p.iter().enumerate() {
                lower[j] = lower[j].min(v);
                upper[j] = upper[j].max(v);
            }
        }
        for j in 0..self.dim() {
            lower[j] = lower[j].max(self.lower[j]);
            upper[j] = upper[j].min(self.upper[j]);
            if lower[j] > upper[j] {
                lower[j] = self.lower[j];
                upper[j] = self.upper[j];
            }
        }
        Bounds { lower, upper }
    }

    pub fn sample_uniform(&self, rng: &mut RngStream) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| rng.uniform_in(lo, hi))
            .collect()
    }
}

/// A position with an optional true fitness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub position: Vec<f64>,
    pub fitness: Option<f64>,
}

impl Solution {
    pub fn new(position: Vec<f64>) -> Self {
        Self {
            position,
            fitness: None,
        }
    }

    pub fn evaluated(position: Vec<f64>, fitness: f64) -> Self {
        Self {
            position,
            fitness: Some(fitness),
        }
    }

    /// Fitness, treating unevaluated solutions as worst.
    pub fn fitness_or_inf(&self) -> f64 {
        self.fitness.unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_bounds() {
        assert!(matches!(
            Bounds::new(vec![0.0, 1.0], vec![1.0, 1.0]),
            Err(Error::InvalidBounds { dim: 1, .. })
        ));
    }

    #[test]
    fn bounding_box_is_clipped() {
        let b = Bounds::uniform(2, -1.0, 1.0).unwrap();
        let pts: [&[f64]; 2] = [&[-3.0, 0.2], &[0.5, 0.4]];
        let bb = b.bounding_box_within(&pts);
        assert_eq!(bb.lower, vec![-1.0, 0.2]);
        assert_eq!(bb.upper, vec![0.5, 0.4]);
    }
}
