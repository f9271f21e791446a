//! Minimizes a cheap function directly with DE/best/1/bin.
//!
//! ```text
//! cargo run --release --example de_minimize -- 20 200
//! ```

use rphsa::benchmarks::{rosenbrock, sphere};
use rphsa::de::{de_optimize, DeParams};
use rphsa::numerics::RngStream;
use rphsa::space::Bounds;

/// Returns the best sphere value found.
pub fn run_example(dim: usize, generations: usize, seed: u64) -> rphsa::Result<f64> {
    let bounds = Bounds::uniform(dim, -5.0, 5.0)?;
    let params = DeParams::default();
    let mut rng = RngStream::new(seed);

    let result = de_optimize(sphere, &bounds, &params, generations, &mut rng)?;
    let best = result.best.fitness_or_inf();
    println!(
        "sphere {dim}-D: {best:.3e} after {} evaluations",
        result.evaluations
    );

    let result = de_optimize(rosenbrock, &bounds, &params, generations, &mut rng)?;
    let trace = &result.best_per_generation;
    let step = (trace.len() / 5).max(1);
    let samples: Vec<String> = trace
        .iter()
        .step_by(step)
        .map(|v| format!("{v:.3e}"))
        .collect();
    println!(
        "rosenbrock {dim}-D best-so-far every {step} generations: {}",
        samples.join(" ")
    );
    Ok(best)
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    run_example(
        *args.first().unwrap_or(&20),
        *args.get(1).unwrap_or(&200),
        0,
    )
    .map(|_| ())
}
