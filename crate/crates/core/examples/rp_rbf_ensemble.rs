//! Trains a random-projection RBF ensemble next to a plain RBF on the same
//! 100-D samples and compares how well each ranks unseen points.
//!
//! ```text
//! cargo run --release --example rp_rbf_ensemble -- 100 50 100
//! ```

use rphsa::benchmarks::ellipsoid;
use rphsa::harness::spearman;
use rphsa::numerics::RngStream;
use rphsa::projection::build_rp_rbf;
use rphsa::surrogate::{train_rbf, Surrogate, TrainingSet};

/// Returns the Spearman correlations (plain, ensemble) with the truth.
pub fn run_example(dim: usize, k: usize, n: usize, seed: u64) -> rphsa::Result<(f64, f64)> {
    let mut rng = RngStream::new(seed);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.uniform_in(-1.0, 1.0)).collect())
        .collect();
    let fitness: Vec<f64> = points.iter().map(|p| ellipsoid(p)).collect();
    let data = TrainingSet::from_points(&points, fitness)?;

    let m = 4 * dim.div_ceil(k);
    let plain = train_rbf(&data)?;
    let ensemble = build_rp_rbf(&data, k, m, &mut rng)?;
    println!(
        "ensemble of {} members in {}-D subspaces of {dim}-D",
        ensemble.m(),
        ensemble.subspace_dim()
    );

    let probes: Vec<Vec<f64>> = (0..100)
        .map(|_| (0..dim).map(|_| rng.uniform_in(-1.0, 1.0)).collect())
        .collect();
    let truth: Vec<f64> = probes.iter().map(|p| ellipsoid(p)).collect();
    let plain_pred = probes
        .iter()
        .map(|p| plain.predict(p))
        .collect::<rphsa::Result<Vec<_>>>()?;
    let ens_pred = probes
        .iter()
        .map(|p| ensemble.predict(p))
        .collect::<rphsa::Result<Vec<_>>>()?;
    let (a, b) = (spearman(&truth, &plain_pred), spearman(&truth, &ens_pred));
    println!("rank correlation with truth: plain {a:.3}, ensemble {b:.3}");
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
        *args.get(1).unwrap_or(&50),
        *args.get(2).unwrap_or(&100),
        3,
    )
    .map(|_| ())
}
