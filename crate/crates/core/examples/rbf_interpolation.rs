//! Fits a multiquadric RBF to samples of a 30-D ellipsoid and reports the
//! error at the training points and at fresh points.
//!
//! ```text
//! cargo run --release --example rbf_interpolation -- 30 60
//! ```

use rphsa::benchmarks::ellipsoid;
use rphsa::numerics::RngStream;
use rphsa::surrogate::{train_rbf, Surrogate, TrainingSet};

/// Returns (max error on training points, mean relative error off-sample).
pub fn run_example(dim: usize, n: usize, seed: u64) -> rphsa::Result<(f64, f64)> {
    let mut rng = RngStream::new(seed);
    let draw = |rng: &mut RngStream| -> Vec<f64> {
        (0..dim).map(|_| rng.uniform_in(-5.12, 5.12)).collect()
    };
    let points: Vec<Vec<f64>> = (0..n).map(|_| draw(&mut rng)).collect();
    let fitness: Vec<f64> = points.iter().map(|p| ellipsoid(p)).collect();
    let model = train_rbf(&TrainingSet::from_points(&points, fitness.clone())?)?;

    let mut train_err: f64 = 0.0;
    for (p, f) in points.iter().zip(&fitness) {
        train_err = train_err.max((model.predict(p)? - f).abs());
    }
    let mut test_err = 0.0;
    let tests = 200;
    for _ in 0..tests {
        let x = draw(&mut rng);
        let f = ellipsoid(&x);
        test_err += (model.predict(&x)? - f).abs() / f;
    }
    let test_err = test_err / tests as f64;
    println!("{n} samples in {dim}-D: max training error {train_err:.2e}, mean off-sample relative error {test_err:.3}");
    Ok((train_err, test_err))
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    run_example(*args.first().unwrap_or(&30), *args.get(1).unwrap_or(&60), 1).map(|_| ())
}
