//! Runs the optimizer once on a 100-D benchmark and prints the outcome.
//!
//! ```text
//! cargo run --release --example run_rphsa -- F1 100 7
//! ```

use std::time::Instant;

use rphsa::benchmarks::{make_problem, ProblemId};
use rphsa::optimizer::{run, Algorithm, RphsaConfig};

pub fn run_example(id: ProblemId, dim: usize, seed: u64, budget: usize) -> rphsa::Result<()> {
    for algorithm in [Algorithm::Rphsa, Algorithm::Baseline] {
        let mut problem = make_problem(id, dim, 0)?;
        let cfg = RphsaConfig {
            k: dim.min(50),
            budget,
            seed,
            ..RphsaConfig::default()
        };
        let start = Instant::now();
        let record = run(&mut problem, &cfg, algorithm)?;
        println!(
            "{algorithm:>8} {id} {dim}-D seed {seed}: best {:.4e} after {} FEs \
             (global steps {}, local searches {}, improving {}) in {:.1?}",
            record.final_fitness(),
            record.evaluations(),
            record.ngs,
            record.nls,
            record.nti,
            start.elapsed()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().map_or(Ok(ProblemId::F1), |s| s.parse())?;
    let dim = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let seed = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    run_example(id, dim, seed, 1000)
}
