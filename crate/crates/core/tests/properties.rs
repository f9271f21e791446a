use proptest::prelude::*;

use rphsa::benchmarks::{make_problem, ProblemId};
use rphsa::numerics::{solve_linear, Matrix, RngStream};
use rphsa::projection::{build_rp_rbf, generate_projection};
use rphsa::surrogate::{train_rbf, Surrogate, TrainingSet};

fn points(rng: &mut RngStream, n: usize, d: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| rng.uniform_in(lo, hi)).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn solve_residual_is_small(n in 1usize..40, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let data: Vec<f64> = (0..n * n).map(|_| rng.gaussian()).collect();
        let a = Matrix::from_row_major(n, n, data).unwrap();
        let b: Vec<f64> = (0..n).map(|_| rng.gaussian()).collect();
        if let Ok(x) = solve_linear(&a, &b) {
            let ax = a.mul_vec(&x).unwrap();
            let scale = a.max_abs() * x.iter().fold(0.0f64, |m, v| m.max(v.abs())) * n as f64
                + b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (l, r) in ax.iter().zip(&b) {
                prop_assert!((l - r).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn projections_have_orthonormal_rows(ki in 0usize..3, di in 0usize..3, seed in any::<u64>()) {
        let (k, d) = ([5, 20, 50][ki], [50, 100, 200][di]);
        let p = generate_projection(k, d, &mut RngStream::new(seed)).unwrap();
        prop_assert!(p.matrix().row_orthonormality_error() < 1e-10);
    }

    #[test]
    fn rbf_is_translation_invariant(d in 2usize..12, n in 3usize..30, seed in any::<u64>(), shift in -3.0f64..3.0) {
        let mut rng = RngStream::new(seed);
        let xs = points(&mut rng, n, d, -2.0, 2.0);
        let fs: Vec<f64> = xs.iter().map(|x| x.iter().map(|v| v.sin()).sum()).collect();
        let moved: Vec<Vec<f64>> = xs.iter().map(|x| x.iter().map(|v| v + shift).collect()).collect();
        let a = train_rbf(&TrainingSet::from_points(&xs, fs.clone()).unwrap()).unwrap();
        let b = train_rbf(&TrainingSet::from_points(&moved, fs).unwrap()).unwrap();
        let q: Vec<f64> = (0..d).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
        let q_moved: Vec<f64> = q.iter().map(|v| v + shift).collect();
        let (pa, pb) = (a.predict(&q).unwrap(), b.predict(&q_moved).unwrap());
        prop_assert!((pa - pb).abs() <= 1e-6 * pa.abs().max(1.0));
    }

    #[test]
    fn rbf_ignores_sample_order(d in 2usize..12, n in 3usize..30, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let xs = points(&mut rng, n, d, -2.0, 2.0);
        let fs: Vec<f64> = xs.iter().map(|x| x.iter().map(|v| v * v).sum()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut order);
        let xs2: Vec<Vec<f64>> = order.iter().map(|&i| xs[i].clone()).collect();
        let fs2: Vec<f64> = order.iter().map(|&i| fs[i]).collect();
        let a = train_rbf(&TrainingSet::from_points(&xs, fs).unwrap()).unwrap();
        let b = train_rbf(&TrainingSet::from_points(&xs2, fs2).unwrap()).unwrap();
        let q: Vec<f64> = (0..d).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
        let (pa, pb) = (a.predict(&q).unwrap(), b.predict(&q).unwrap());
        prop_assert!((pa - pb).abs() <= 1e-6 * pa.abs().max(1.0));
    }

    #[test]
    fn ensemble_interpolates(d in 4usize..40, n in 3usize..40, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let k = d.div_ceil(2);
        let xs = points(&mut rng, n, d, -1.0, 1.0);
        let fs: Vec<f64> = xs.iter().map(|x| 1.0 + x.iter().map(|v| v * v).sum::<f64>()).collect();
        let ens = build_rp_rbf(&TrainingSet::from_points(&xs, fs.clone()).unwrap(), k, 3, &mut rng).unwrap();
        for (x, f) in xs.iter().zip(&fs) {
            prop_assert!((ens.predict(x).unwrap() - f).abs() <= 1e-6 * f.abs());
        }
    }
}

// Reference formulas written out independently of the library.
fn ellipsoid_ref(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, v) in x.iter().enumerate() {
        s += (i as f64 + 1.0) * v * v;
    }
    s
}

fn rosenbrock_ref(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() - 1 {
        let a = x[i + 1] - x[i] * x[i];
        let b = x[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    s
}

fn ackley_ref(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mut sq = 0.0;
    let mut cs = 0.0;
    for v in x {
        sq += v * v;
        cs += (2.0 * std::f64::consts::PI * v).cos();
    }
    20.0 + std::f64::consts::E - 20.0 * (-0.2 * (sq / n).sqrt()).exp() - (cs / n).exp()
}

fn griewank_ref(x: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut p = 1.0;
    for (i, v) in x.iter().enumerate() {
        s += v * v / 4000.0;
        p *= (v / (i as f64 + 1.0).sqrt()).cos();
    }
    1.0 + s - p
}

#[test]
fn f1_to_f4_match_reference_formulas() {
    type Oracle = fn(&[f64]) -> f64;
    let refs: [(ProblemId, Oracle); 4] = [
        (ProblemId::F1, ellipsoid_ref),
        (ProblemId::F2, rosenbrock_ref),
        (ProblemId::F3, ackley_ref),
        (ProblemId::F4, griewank_ref),
    ];
    let mut rng = RngStream::new(17);
    for (id, oracle) in refs {
        for dim in [2usize, 10, 100] {
            let mut problem = make_problem(id, dim, 0).unwrap();
            let (lo, hi) = id.default_interval();
            for x in points(&mut rng, 100, dim, lo, hi) {
                let (got, want) = (problem.evaluate(&x).unwrap(), oracle(&x));
                assert!(
                    (got - want).abs() <= 1e-10 * want.abs().max(1.0),
                    "{id} {dim}-D: {got} vs {want}"
                );
            }
            assert_eq!(problem.eval_count(), 100);
        }
    }
}
