//! Grid search over the subspace dimension `k` and local training size `n`.

use serde::{Deserialize, Serialize};

use super::campaign::{execute_campaign, Campaign, ProblemSpec};
use super::stats::mean_std;
use crate::error::{Error, Result};
use crate::optimizer::{Algorithm, RphsaConfig};

pub const DEFAULT_K: usize = 50;
pub const DEFAULT_N: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub k: usize,
    pub n_local: usize,
    pub m: usize,
    pub runs: usize,
    pub mean: f64,
    pub std: f64,
    #[serde(skip)]
    pub finals: Vec<f64>,
    pub default: bool,
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub problem: ProblemSpec,
    pub k_values: Vec<usize>,
    pub n_values: Vec<usize>,
    pub runs: usize,
    pub budget: usize,
    pub base_seed: u64,
    /// Other settings; `k`, `n_local` and `m` are set per cell.
    pub base: RphsaConfig,
}

/// One RPHSA campaign per `(k, n)` pair, `m` reset to `4 * ceil(d / k)`.
pub fn sweep(req: &SweepRequest) -> Result<Vec<SweepCell>> {
    if req.k_values.is_empty() || req.n_values.is_empty() {
        return Err(Error::InvalidConfig("sweep grids must not be empty".into()));
    }
    let mut cells = Vec::with_capacity(req.k_values.len() * req.n_values.len());
    for &k in &req.k_values {
        for &n in &req.n_values {
            let campaign = Campaign {
                problems: vec![req.problem],
                algorithms: vec![Algorithm::Rphsa],
                runs_per_cell: req.runs,
                budget: req.budget,
                base_seed: req.base_seed,
                config: RphsaConfig {
                    k,
                    n_local: n,
                    m: None,
                    ..req.base.clone()
                },
                out_dir: Default::default(),
            };
            let report = execute_campaign(&campaign)?;
            let cell = &report.cells[0];
            if let Some(f) = cell.failures.first() {
                return Err(Error::InvalidConfig(format!(
                    "sweep cell k = {k}, n = {n}: run {} failed: {}",
                    f.run, f.error
                )));
            }
            let (mean, std) = mean_std(&cell.finals);
            cells.push(SweepCell {
                k,
                n_local: n,
                m: campaign.config.effective_m(req.problem.dim),
                runs: cell.runs,
                mean,
                std,
                finals: cell.finals.clone(),
                default: k == DEFAULT_K && n == DEFAULT_N,
            });
        }
    }
    Ok(cells)
}

/// Writes `k,n_local,m,runs,mean,std,default` rows.
pub fn write_sweep_csv<W: std::io::Write>(cells: &[SweepCell], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for c in cells {
        w.serialize(c)?;
    }
    w.flush()?;
    Ok(())
}
