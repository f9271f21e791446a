//! Runs a small campaign of both algorithms on one problem, writes the
//! per-run CSVs and summary, and prints the rank-sum verdict.
//!
//! ```text
//! cargo run --release --example compare_baseline -- F3 30 5 results/f3
//! ```

use std::path::PathBuf;

use rphsa::benchmarks::ProblemId;
use rphsa::harness::{run_campaign, Campaign, CampaignReport, ProblemSpec};
use rphsa::optimizer::{Algorithm, RphsaConfig};

pub fn run_example(
    id: ProblemId,
    dim: usize,
    runs: usize,
    budget: usize,
    config: RphsaConfig,
    out_dir: PathBuf,
) -> rphsa::Result<CampaignReport> {
    let campaign = Campaign {
        problems: vec![ProblemSpec {
            id,
            dim,
            data_seed: 0,
        }],
        algorithms: vec![Algorithm::Rphsa, Algorithm::Baseline],
        runs_per_cell: runs,
        budget,
        base_seed: 1,
        config,
        out_dir,
    };
    let report = run_campaign(&campaign)?;
    for cell in &report.cells {
        let w = cell
            .wilcoxon
            .as_ref()
            .map_or(String::new(), |w| format!("p = {:.3} ({})", w.p, w.verdict));
        println!(
            "{:<8} mean {:.4e}  std {:.3e}  NLS {:.1}  NTI {:.1}  {w}",
            cell.algorithm, cell.mean, cell.std, cell.nls_mean, cell.nti_mean
        );
    }
    println!(
        "wrote {} run files to {}",
        report.records.len(),
        campaign.out_dir.display()
    );
    Ok(report)
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().map_or(Ok(ProblemId::F1), |s| s.parse())?;
    let dim = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let runs = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5);
    let out = args
        .get(3)
        .map_or_else(|| PathBuf::from("results/compare"), PathBuf::from);
    let config = RphsaConfig {
        k: dim.min(50) / 2,
        ..RphsaConfig::default()
    };
    run_example(id, dim, runs, 1000, config, out).map(|_| ())
}
