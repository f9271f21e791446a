//! Side-by-side accuracy of the plain and projected local models on a live
//! local-search population.

use serde::{Deserialize, Serialize};

use super::stats::spearman;
use crate::benchmarks::{Problem, ProblemDescriptor};
use crate::error::{Error, Result};
use crate::optimizer::{Algorithm, Phase, RphsaConfig, Runner};
use crate::surrogate::{train_rbf, Surrogate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub true_f: f64,
    pub plain: f64,
    pub rp_rbf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub problem: ProblemDescriptor,
    pub seed: u64,
    /// Real evaluations spent when the population was captured.
    pub fe: usize,
    /// Sorted by true fitness, ascending.
    pub rows: Vec<ProbeRow>,
    pub spearman_plain: f64,
    pub spearman_rp_rbf: f64,
}

impl ProbeReport {
    pub fn rp_rbf_at_least_as_good(&self) -> bool {
        self.spearman_rp_rbf >= self.spearman_plain
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs the optimizer with the projected local model until the first local
/// step that starts with at least half of the budget spent, then scores the
/// final inner-DE population of that step with the true function, the
/// ensemble that drove the search, and a plain RBF trained on the same
/// points.
pub fn accuracy_probe(problem: &mut Problem, cfg: &RphsaConfig) -> Result<ProbeReport> {
    let mut runner = Runner::new(problem, cfg.clone(), Algorithm::Rphsa)?;
    loop {
        if runner.is_done() {
            return Err(Error::ProbeNotReached);
        }
        if runner.phase() == Phase::Local && 2 * runner.evaluations() >= cfg.budget {
            break;
        }
        runner.step()?;
    }
    let fe = runner.evaluations();
    let detail = runner.local_step_detailed()?;
    let plain = train_rbf(&detail.training)?;
    drop(runner);

    let mut rows = detail
        .search
        .population
        .individuals
        .iter()
        .map(|ind| {
            Ok(ProbeRow {
                true_f: problem.evaluate_uncounted(&ind.position)?,
                plain: plain.predict(&ind.position)?,
                rp_rbf: detail.model.predict(&ind.position)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.true_f.total_cmp(&b.true_f));

    let truth: Vec<f64> = rows.iter().map(|r| r.true_f).collect();
    let plain_col: Vec<f64> = rows.iter().map(|r| r.plain).collect();
    let rp_col: Vec<f64> = rows.iter().map(|r| r.rp_rbf).collect();
    Ok(ProbeReport {
        problem: problem.descriptor(),
        seed: cfg.seed,
        fe,
        spearman_plain: spearman(&truth, &plain_col),
        spearman_rp_rbf: spearman(&truth, &rp_col),
        rows,
    })
}
