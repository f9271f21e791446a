//! Space-filling initial designs.
//!
//! [`olhs`] draws several jittered Latin hypercubes and keeps the one with
//! the largest minimum pairwise distance (maximin).

use crate::error::{Error, Result};
use crate::numerics::{squared_distance, RngStream};
use crate::space::Bounds;

/// Number of candidate hypercubes compared by [`olhs`].
pub const DEFAULT_CANDIDATES: usize = 20;

/// A Latin hypercube design inside a box.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub points: Vec<Vec<f64>>,
    pub bounds: Bounds,
}

impl Design {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_pairwise_distance(&self) -> f64 {
        min_pairwise_distance(&self.points)
    }

    /// True when every dimension has exactly one point per stratum.
    pub fn is_latin(&self) -> bool {
        let n = self.points.len();
        (0..self.bounds.dim()).all(|j| {
            let (lo, hi) = (self.bounds.lower[j], self.bounds.upper[j]);
            let mut seen = vec![false; n];
            self.points.iter().all(|p| {
                let v = p[j];
                if v < lo || v > hi {
                    return false;
                }
                let s = (((v - lo) / (hi - lo)) * n as f64).floor() as usize;
                let s = s.min(n - 1);
                !std::mem::replace(&mut seen[s], true)
            })
        })
    }
}

pub fn min_pairwise_distance(points: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min(squared_distance(&points[i], &points[j]));
        }
    }
    best.sqrt()
}

/// One jittered Latin hypercube: a random permutation of strata per
/// dimension and a uniform offset within each stratum.
pub fn latin_hypercube(n_points: usize, bounds: &Bounds, rng: &mut RngStream) -> Vec<Vec<f64>> {
    let dim = bounds.dim();
    let mut points = vec![vec![0.0; dim]; n_points];
    let mut strata: Vec<usize> = (0..n_points).collect();
    for j in 0..dim {
        rng.shuffle(&mut strata);
        let (lo, hi) = (bounds.lower[j], bounds.upper[j]);
        let width = (hi - lo) / n_points as f64;
        for (p, &s) in points.iter_mut().zip(&strata) {
            // Clamp guards the top stratum against rounding past `hi`.
            p[j] = (lo + width * (s as f64 + rng.uniform())).min(hi);
        }
    }
    points
}

/// Maximin Latin hypercube with [`DEFAULT_CANDIDATES`] candidates.
pub fn olhs(n_points: usize, bounds: &Bounds, rng: &mut RngStream) -> Result<Design> {
    olhs_with_candidates(n_points, bounds, DEFAULT_CANDIDATES, rng)
}

pub fn olhs_with_candidates(
    n_points: usize,
    bounds: &Bounds,
    candidates: usize,
    rng: &mut RngStream,
) -> Result<Design> {
    bounds.validate()?;
    if n_points < 2 {
        return Err(Error::InvalidConfig(format!(
            "a design needs at least 2 points, got {n_points}"
        )));
    }
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    for _ in 0..candidates.max(1) {
        let points = latin_hypercube(n_points, bounds, rng);
        let score = min_pairwise_distance(&points);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, points));
        }
    }
    let (_, points) = best.expect("at least one candidate");
    Ok(Design {
        points,
        bounds: bounds.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_per_stratum_in_1d() {
        let b = Bounds::uniform(1, 0.0, 4.0).unwrap();
        let d = olhs(4, &b, &mut RngStream::new(1)).unwrap();
        let mut cells: Vec<usize> = d.points.iter().map(|p| p[0].floor() as usize).collect();
        cells.sort_unstable();
        assert_eq!(cells, vec![0, 1, 2, 3]);
    }

    #[test]
    fn latin_in_high_dimension() {
        let b = Bounds::uniform(100, -5.12, 5.12).unwrap();
        let d = olhs(50, &b, &mut RngStream::new(8)).unwrap();
        assert_eq!(d.len(), 50);
        assert!(d.is_latin());
        assert!(d.points.iter().all(|p| b.contains(p)));
    }

    #[test]
    fn beats_plain_lhs_most_of_the_time() {
        let b = Bounds::uniform(5, 0.0, 1.0).unwrap();
        let mut wins = 0;
        for trial in 0..100u64 {
            let opt = olhs(20, &b, &mut RngStream::new(trial)).unwrap();
            let plain = latin_hypercube(20, &b, &mut RngStream::new(trial + 10_000));
            if opt.min_pairwise_distance() >= min_pairwise_distance(&plain) {
                wins += 1;
            }
        }
        assert!(wins >= 90, "maximin design won only {wins}/100");
    }

    #[test]
    fn invalid_inputs() {
        let bad = Bounds {
            lower: vec![1.0],
            upper: vec![1.0],
        };
        assert!(matches!(
            olhs(4, &bad, &mut RngStream::new(0)),
            Err(Error::InvalidBounds { .. })
        ));
        let b = Bounds::uniform(2, 0.0, 1.0).unwrap();
        assert!(olhs(1, &b, &mut RngStream::new(0)).is_err());
    }

    #[test]
    fn deterministic() {
        let b = Bounds::uniform(3, -1.0, 1.0).unwrap();
        let a = olhs(10, &b, &mut RngStream::new(4)).unwrap();
        let c = olhs(10, &b, &mut RngStream::new(4)).unwrap();
        assert_eq!(a, c);
    }
}
