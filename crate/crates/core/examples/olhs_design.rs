//! Draws a maximin Latin hypercube and compares its spread with a single
//! random Latin hypercube.
//!
//! ```text
//! cargo run --release --example olhs_design -- 100 100
//! ```

use rphsa::numerics::RngStream;
use rphsa::sampling::{latin_hypercube, min_pairwise_distance, olhs};
use rphsa::space::Bounds;

/// Returns (optimized minimum distance, plain minimum distance).
pub fn run_example(n: usize, dim: usize, seed: u64) -> rphsa::Result<(f64, f64)> {
    let bounds = Bounds::uniform(dim, -5.12, 5.12)?;
    let design = olhs(n, &bounds, &mut RngStream::new(seed))?;
    let plain = latin_hypercube(n, &bounds, &mut RngStream::new(seed + 1000));
    let (a, b) = (
        design.min_pairwise_distance(),
        min_pairwise_distance(&plain),
    );
    println!("{n} points in {dim}-D, Latin: {}", design.is_latin());
    println!("minimum pairwise distance: optimized {a:.3}, single draw {b:.3}");
    Ok((a, b))
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    run_example(
        *args.first().unwrap_or(&100),
        *args.get(1).unwrap_or(&100),
        0,
    )
    .map(|_| ())
}
