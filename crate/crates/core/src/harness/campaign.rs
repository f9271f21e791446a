//! Repeated seeded runs over problems and algorithms.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{mean_std, verdict, wilcoxon_ranksum};
use crate::benchmarks::{make_problem, ProblemId};
use crate::error::{Error, Result};
use crate::optimizer::{run, Algorithm, RphsaConfig, RunRecord};

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub dim: usize,
    #[serde(default)]
    pub data_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Campaign {
    pub problems: Vec<ProblemSpec>,
    pub algorithms: Vec<Algorithm>,
    pub runs_per_cell: usize,
    pub budget: usize,
    /// Run `i` uses seed `base_seed + i`.
    pub base_seed: u64,
    /// Settings shared by every run; `budget` and `seed` are overridden.
    pub config: RphsaConfig,
    pub out_dir: PathBuf,
}

impl Default for Campaign {
    fn default() -> Self {
        Self {
            problems: vec![ProblemSpec {
                id: ProblemId::F1,
                dim: 100,
                data_seed: 0,
            }],
            algorithms: vec![Algorithm::Rphsa, Algorithm::Baseline],
            runs_per_cell: 30,
            budget: 1000,
            base_seed: 0,
            config: RphsaConfig::default(),
            out_dir: PathBuf::from("results"),
        }
    }
}

impl Campaign {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(File::open(path)?)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs_per_cell == 0 {
            return Err(Error::InvalidConfig(
                "runs_per_cell must be at least 1".into(),
            ));
        }
        if self.problems.is_empty() || self.algorithms.is_empty() {
            return Err(Error::InvalidConfig(
                "campaign needs a problem and an algorithm".into(),
            ));
        }
        for p in &self.problems {
            self.run_config(0).validate(p.dim)?;
        }
        Ok(())
    }

    pub fn run_config(&self, run_index: usize) -> RphsaConfig {
        RphsaConfig {
            budget: self.budget,
            seed: self.base_seed + run_index as u64,
            ..self.config.clone()
        }
    }
}

pub fn csv_name(problem: &ProblemSpec, algorithm: Algorithm, run_index: usize) -> String {
    format!(
        "{}_{}_{}_run{:02}.csv",
        problem.id, problem.dim, algorithm, run_index
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonEntry {
    pub vs: Algorithm,
    pub p: f64,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub run: usize,
    pub error: String,
}

/// Statistics of one (problem, algorithm) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub problem: ProblemId,
    pub dim: usize,
    pub algorithm: Algorithm,
    /// Completed runs.
    pub runs: usize,
    /// NaN (written as null) when no run completed.
    #[serde(deserialize_with = "nan_if_null")]
    pub mean: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub std: f64,
    pub finals: Vec<f64>,
    #[serde(deserialize_with = "nan_if_null")]
    pub nls_mean: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub nti_mean: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub nti_over_nls: f64,
    pub wilcoxon: Option<WilcoxonEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<RunFailure>,
}

fn nan_if_null<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl CellSummary {
    pub fn from_records(
        problem: &ProblemSpec,
        algorithm: Algorithm,
        records: &[RunRecord],
    ) -> Self {
        let finals: Vec<f64> = records.iter().map(RunRecord::final_fitness).collect();
        let (mean, std) = mean_std(&finals);
        let per_run =
            |f: fn(&RunRecord) -> f64| records.iter().map(f).sum::<f64>() / records.len() as f64;
        Self {
            problem: problem.id,
            dim: problem.dim,
            algorithm,
            runs: records.len(),
            mean,
            std,
            finals,
            nls_mean: per_run(|r| r.nls as f64),
            nti_mean: per_run(|r| r.nti as f64),
            nti_over_nls: per_run(RunRecord::nti_over_nls),
            wilcoxon: None,
            failures: Vec::new(),
        }
    }
}

/// Result of a campaign: every cell summary and the records of successful runs.
#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub cells: Vec<CellSummary>,
    pub records: Vec<(ProblemSpec, Algorithm, usize, RunRecord)>,
}

impl CampaignReport {
    pub fn cell(&self, id: ProblemId, dim: usize, algorithm: Algorithm) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.problem == id && c.dim == dim && c.algorithm == algorithm)
    }

    pub fn failed_runs(&self) -> usize {
        self.cells.iter().map(|c| c.failures.len()).sum()
    }
}

/// Runs every cell without touching the file system.
pub fn execute_campaign(c: &Campaign) -> Result<CampaignReport> {
    c.validate()?;
    let jobs: Vec<(ProblemSpec, Algorithm, usize)> = c
        .problems
        .iter()
        .flat_map(|&p| {
            c.algorithms
                .iter()
                .flat_map(move |&a| (0..c.runs_per_cell).map(move |r| (p, a, r)))
        })
        .collect();
    let outcomes: Vec<Result<RunRecord>> = jobs
        .par_iter()
        .map(|&(p, a, r)| {
            let mut problem = make_problem(p.id, p.dim, p.data_seed)?;
            run(&mut problem, &c.run_config(r), a)
        })
        .collect();

    let mut cells = Vec::new();
    let mut records = Vec::new();
    let mut outcomes = jobs.into_iter().zip(outcomes);
    for p in &c.problems {
        for &a in &c.algorithms {
            let mut ok = Vec::new();
            let mut failures = Vec::new();
            for ((_, _, r), outcome) in outcomes.by_ref().take(c.runs_per_cell) {
                match outcome {
                    Ok(rec) => ok.push((r, rec)),
                    Err(e) => failures.push(RunFailure {
                        run: r,
                        error: e.to_string(),
                    }),
                }
            }
            let recs: Vec<RunRecord> = ok.iter().map(|(_, rec)| rec.clone()).collect();
            let mut cell = CellSummary::from_records(p, a, &recs);
            cell.failures = failures;
            cells.push(cell);
            records.extend(ok.into_iter().map(|(r, rec)| (*p, a, r, rec)));
        }
    }
    attach_wilcoxon(&mut cells);
    Ok(CampaignReport { cells, records })
}

/// Compares each cell with the first other algorithm on the same problem.
fn attach_wilcoxon(cells: &mut [CellSummary]) {
    let snapshot = cells.to_vec();
    for cell in cells.iter_mut() {
        let Some(other) = snapshot.iter().find(|o| {
            o.problem == cell.problem && o.dim == cell.dim && o.algorithm != cell.algorithm
        }) else {
            continue;
        };
        cell.wilcoxon = compare_finals(&cell.finals, &other.finals).map(|(p, v)| WilcoxonEntry {
            vs: other.algorithm,
            p,
            verdict: v.to_string(),
        });
    }
}

/// p-value and verdict of `a` against `b`; `None` when either has fewer than two values.
pub fn compare_finals(a: &[f64], b: &[f64]) -> Option<(f64, &'static str)> {
    match wilcoxon_ranksum(a, b) {
        Ok(t) => Some((t.p, verdict(a, b, t.p))),
        Err(Error::DegenerateSamples) => Some((1.0, "=")),
        Err(_) => None,
    }
}

/// Runs the campaign and writes one CSV per run plus `summary.json`.
pub fn run_campaign(c: &Campaign) -> Result<CampaignReport> {
    let report = execute_campaign(c)?;
    fs::create_dir_all(&c.out_dir)?;
    for (p, a, r, rec) in &report.records {
        let file = File::create(c.out_dir.join(csv_name(p, *a, *r)))?;
        rec.write_csv(BufWriter::new(file), *r)?;
    }
    write_summary(&c.out_dir, &report.cells)?;
    Ok(report)
}

pub fn write_summary(dir: &Path, cells: &[CellSummary]) -> Result<()> {
    let file = File::create(dir.join(SUMMARY_FILE))?;
    serde_json::to_writer_pretty(BufWriter::new(file), cells)?;
    Ok(())
}

pub fn read_summary(dir: &Path) -> Result<Vec<CellSummary>> {
    Ok(serde_json::from_reader(File::open(
        dir.join(SUMMARY_FILE),
    )?)?)
}
