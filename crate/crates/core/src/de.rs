//! Differential evolution: mutation, binomial crossover and a small
//! stand-alone minimizer used on cheap surrogate objectives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RngStream;
use crate::space::{Bounds, Solution};

/// Smallest population the mutation operators accept.
pub const MIN_POPULATION: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// `v = x_best + F (x_r1 - x_r2)`
    #[default]
    Best1Bin,
    /// `v = x_r0 + F (x_r1 - x_r2)`
    Rand1Bin,
}

/// What to do with mutant coordinates that leave the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundRepair {
    #[default]
    Clamp,
    Reflect,
    Resample,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeParams {
    pub scale_f: f64,
    pub crossover_cr: f64,
    pub pop_size: usize,
    #[serde(default)]
    pub strategy: Strategy,
    #[serde(default)]
    pub repair: BoundRepair,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            scale_f: 0.5,
            crossover_cr: 0.9,
            pop_size: 50,
            strategy: Strategy::Best1Bin,
            repair: BoundRepair::Clamp,
        }
    }
}

impl DeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale_f > 0.0 && self.scale_f <= 2.0) {
            return Err(Error::InvalidConfig(format!(
                "DE scale factor {} outside (0, 2]",
                self.scale_f
            )));
        }
        if !(0.0..=1.0).contains(&self.crossover_cr) {
            return Err(Error::InvalidConfig(format!(
                "DE crossover rate {} outside [0, 1]",
                self.crossover_cr
            )));
        }
        if self.pop_size < MIN_POPULATION {
            return Err(Error::PopulationTooSmall {
                size: self.pop_size,
                required: MIN_POPULATION,
            });
        }
        Ok(())
    }
}

/// A DE population inside a box.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub individuals: Vec<Solution>,
    pub bounds: Bounds,
    pub generation: usize,
}

impl Population {
    pub fn new(individuals: Vec<Solution>, bounds: Bounds) -> Self {
        Self {
            individuals,
            bounds,
            generation: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    /// Index of the lowest known fitness; ties go to the lowest index.
    pub fn best_index(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in self.individuals.iter().enumerate() {
            let f = s.fitness_or_inf();
            if best.is_none_or(|(_, b)| f < b) {
                best = Some((i, f));
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Draws `count` distinct indices from `0..n`, all different from `exclude`.
fn distinct_indices<const N: usize>(n: usize, exclude: usize, rng: &mut RngStream) -> [usize; N] {
    let mut out = [0usize; N];
    for slot in 0..N {
        loop {
            let r = rng.index(n);
            if r != exclude && !out[..slot].contains(&r) {
                out[slot] = r;
                break;
            }
        }
    }
    out
}

fn repair(v: &mut [f64], bounds: &Bounds, mode: BoundRepair, rng: &mut RngStream) {
    for (j, x) in v.iter_mut().enumerate() {
        let (lo, hi) = (bounds.lower[j], bounds.upper[j]);
        if *x >= lo && *x <= hi {
            continue;
        }
        *x = match mode {
            BoundRepair::Clamp => x.clamp(lo, hi),
            BoundRepair::Reflect => {
                let r = if *x < lo {
                    2.0 * lo - *x
                } else {
                    2.0 * hi - *x
                };
                r.clamp(lo, hi)
            }
            BoundRepair::Resample => rng.uniform_in(lo, hi),
        };
    }
}

/// Builds the mutant vector for `target_index`, repaired into the box.
pub fn mutate(
    pop: &Population,
    target_index: usize,
    best: &[f64],
    params: &DeParams,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    if pop.len() < MIN_POPULATION {
        return Err(Error::PopulationTooSmall {
            size: pop.len(),
            required: MIN_POPULATION,
        });
    }
    let pos = |i: usize| pop.individuals[i].position.as_slice();
    let mut v: Vec<f64> = match params.strategy {
        Strategy::Best1Bin => {
            let [r1, r2] = distinct_indices::<2>(pop.len(), target_index, rng);
            best.iter()
                .zip(pos(r1).iter().zip(pos(r2)))
                .map(|(b, (a, c))| b + params.scale_f * (a - c))
                .collect()
        }
        Strategy::Rand1Bin => {
            let [r0, r1, r2] = distinct_indices::<3>(pop.len(), target_index, rng);
            pos(r0)
                .iter()
                .zip(pos(r1).iter().zip(pos(r2)))
                .map(|(b, (a, c))| b + params.scale_f * (a - c))
                .collect()
        }
    };
    repair(&mut v, &pop.bounds, params.repair, rng);
    Ok(v)
}

/// Binomial crossover with one forced mutant coordinate.
pub fn crossover(
    parent: &[f64],
    mutant: &[f64],
    params: &DeParams,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    if parent.len() != mutant.len() {
        return Err(Error::DimensionMismatch {
            expected: parent.len(),
            got: mutant.len(),
        });
    }
    let j_rand = rng.index(parent.len().max(1));
    Ok(parent
        .iter()
        .zip(mutant)
        .enumerate()
        .map(|(j, (&p, &m))| {
            if rng.uniform() < params.crossover_cr || j == j_rand {
                m
            } else {
                p
            }
        })
        .collect())
}

/// Outcome of [`de_optimize`].
#[derive(Debug, Clone)]
pub struct DeResult {
    pub best: Solution,
    /// Best fitness after initialization and after each generation.
    pub best_per_generation: Vec<f64>,
    pub population: Population,
    pub evaluations: usize,
}

/// Minimizes `objective` over `bounds` with DE and greedy selection.
///
/// Calls the objective exactly `pop_size * (generations + 1)` times.
pub fn de_optimize<F>(
    mut objective: F,
    bounds: &Bounds,
    params: &DeParams,
    generations: usize,
    rng: &mut RngStream,
) -> Result<DeResult>
where
    F: FnMut(&[f64]) -> f64,
{
    params.validate()?;
    let mut evaluations = 0;
    let individuals = (0..params.pop_size)
        .map(|_| {
            let x = bounds.sample_uniform(rng);
            let f = objective(&x);
            evaluations += 1;
            Solution::evaluated(x, f)
        })
        .collect();
    let mut pop = Population::new(individuals, bounds.clone());
    let mut best_idx = pop.best_index().expect("non-empty population");
    let mut best_per_generation = vec![pop.individuals[best_idx].fitness_or_inf()];

    // Survivors replace their parents immediately, and the best individual
    // is refreshed as soon as a trial beats it.
    for _ in 0..generations {
        for i in 0..pop.len() {
            let best = pop.individuals[best_idx].position.clone();
            let mutant = mutate(&pop, i, &best, params, rng)?;
            let trial = crossover(&pop.individuals[i].position, &mutant, params, rng)?;
            let f = objective(&trial);
            evaluations += 1;
            if f <= pop.individuals[i].fitness_or_inf() {
                pop.individuals[i] = Solution::evaluated(trial, f);
                if f < pop.individuals[best_idx].fitness_or_inf() {
                    best_idx = i;
                }
            }
        }
        pop.generation += 1;
        best_per_generation.push(pop.individuals[best_idx].fitness_or_inf());
    }

    Ok(DeResult {
        best: pop.individuals[best_idx].clone(),
        best_per_generation,
        population: pop,
        evaluations,
    })
}
