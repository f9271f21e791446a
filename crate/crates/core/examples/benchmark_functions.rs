//! Lists the benchmark suite: bounds, the value at the known optimizer and
//! at a random point.
//!
//! ```text
//! cargo run --release --example benchmark_functions -- 100
//! ```

use rphsa::benchmarks::{make_problem, ProblemId};
use rphsa::numerics::RngStream;

/// Returns (id, value at the optimizer, optimum value) for each problem.
pub fn run_example(dim: usize, seed: u64) -> rphsa::Result<Vec<(ProblemId, f64, f64)>> {
    let mut rng = RngStream::new(seed);
    let mut out = Vec::new();
    for id in ProblemId::ALL {
        let mut problem = make_problem(id, dim, seed)?;
        let at_opt = problem.evaluate(&problem.known_optimizer())?;
        let random = problem.bounds().sample_uniform(&mut rng);
        let at_random = problem.evaluate(&random)?;
        let (lo, hi) = id.default_interval();
        println!(
            "{id} {:<28} [{lo}, {hi}]^{dim}  f(x*) = {at_opt:>12.4}  f(random) = {at_random:>12.4e}  evals {}",
            id.name(),
            problem.eval_count()
        );
        out.push((id, at_opt, problem.optimum_value()));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    let dim = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    run_example(dim, 0).map(|_| ())
}
