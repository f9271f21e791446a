//! Runs both algorithms a few times and renders their mean convergence
//! curves to an SVG file.
//!
//! ```text
//! cargo run --release --example convergence_plot -- F1 30 convergence.svg
//! ```

use std::path::Path;

use rphsa::benchmarks::ProblemId;
use rphsa::harness::{
    emit_convergence_plot, run_campaign, series_from_dir, Campaign, ProblemSpec, Series,
};
use rphsa::optimizer::{Algorithm, RphsaConfig};

pub fn run_example(
    id: ProblemId,
    dim: usize,
    runs: usize,
    budget: usize,
    config: RphsaConfig,
    out: &Path,
) -> rphsa::Result<Vec<Series>> {
    let work = out.with_extension("runs");
    run_campaign(&Campaign {
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
        out_dir: work.clone(),
    })?;
    let series = series_from_dir(&work)?;
    emit_convergence_plot(&series, out, true)?;
    for s in &series {
        let last = s.points.last().map_or(f64::NAN, |p| p.1);
        println!(
            "{:<20} {} points, final mean {last:.4e}",
            s.label,
            s.points.len()
        );
    }
    println!("plot written to {}", out.display());
    Ok(series)
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().map_or(Ok(ProblemId::F1), |s| s.parse())?;
    let dim = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let out = args.get(2).map_or("convergence.svg", String::as_str);
    let config = RphsaConfig {
        k: dim.min(50) / 2,
        ..RphsaConfig::default()
    };
    run_example(id, dim, 3, 1000, config, Path::new(out)).map(|_| ())
}
