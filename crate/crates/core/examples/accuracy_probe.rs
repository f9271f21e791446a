//! Captures a local-search population halfway through a run and scores it
//! with the true function, a plain RBF and the projected ensemble.
//!
//! ```text
//! cargo run --release --example accuracy_probe -- F1 100 3
//! ```

use rphsa::benchmarks::{make_problem, ProblemId};
use rphsa::harness::{accuracy_probe, ProbeReport};
use rphsa::optimizer::RphsaConfig;

pub fn run_example(
    id: ProblemId,
    dim: usize,
    seed: u64,
    config: RphsaConfig,
) -> rphsa::Result<ProbeReport> {
    let mut problem = make_problem(id, dim, 0)?;
    let report = accuracy_probe(&mut problem, &RphsaConfig { seed, ..config })?;
    println!(
        "{id} {dim}-D seed {seed}: population captured after {} evaluations",
        report.fe
    );
    println!("{:>12} {:>12} {:>12}", "true", "plain", "rp-rbf");
    for row in report.rows.iter().step_by((report.rows.len() / 10).max(1)) {
        println!(
            "{:>12.4e} {:>12.4e} {:>12.4e}",
            row.true_f, row.plain, row.rp_rbf
        );
    }
    println!(
        "spearman with truth: plain {:.3}, rp-rbf {:.3}",
        report.spearman_plain, report.spearman_rp_rbf
    );
    Ok(report)
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().map_or(Ok(ProblemId::F1), |s| s.parse())?;
    let dim = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let seed = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    run_example(id, dim, seed, RphsaConfig::default()).map(|_| ())
}
