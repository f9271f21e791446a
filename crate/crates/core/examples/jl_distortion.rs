//! Measures how well random orthonormal projections preserve pairwise
//! distances, with and without the sqrt(d/k) rescaling.
//!
//! ```text
//! cargo run --release --example jl_distortion -- 100 50
//! ```

use rphsa::numerics::{Matrix, RngStream};
use rphsa::projection::{generate_projection, jl_distortion};

/// Returns the fraction of scale-corrected ratios inside [0.5, 1.5].
pub fn run_example(dim: usize, k: usize, n: usize, seed: u64) -> rphsa::Result<f64> {
    let mut rng = RngStream::new(seed);
    let columns: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.uniform()).collect())
        .collect();
    let x = Matrix::from_columns(&columns)?;
    let p = generate_projection(k, dim, &mut rng)?;

    let raw = jl_distortion(&p, &x, false)?;
    let corrected = jl_distortion(&p, &x, true)?;
    println!(
        "{k}x{dim} projection, {n} points, {} pairs",
        raw.ratios.len()
    );
    println!(
        "  raw ratios:       mean {:.3}  min {:.3}  max {:.3}",
        raw.mean, raw.min, raw.max
    );
    println!(
        "  corrected ratios: mean {:.3}  min {:.3}  max {:.3}  epsilon {:.3}",
        corrected.mean, corrected.min, corrected.max, corrected.epsilon
    );
    let within = corrected.fraction_within(0.5, 1.5);
    println!("  fraction in [0.5, 1.5]: {within:.4}");
    Ok(within)
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    run_example(
        *args.first().unwrap_or(&100),
        *args.get(1).unwrap_or(&50),
        100,
        0,
    )
    .map(|_| ())
}
