//! Acceptance checks. Each test writes one `criterion N ... PASS|FAIL` line to
//! stderr (bypassing output capture) so the verdicts appear in plain
//! `cargo test` output.
//!
//! Criteria 1 to 6 always assert. Criteria 7 to 11 compare stochastic
//! optimization campaigns against published directions; they always report,
//! and assert only when `RPHSA_STRICT_REPRODUCTION` is set.

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rphsa::benchmarks::{ellipsoid, make_problem, ProblemId};
use rphsa::harness::stats::{midranks, verdict};
use rphsa::harness::{accuracy_probe, wilcoxon_ranksum, ProbeReport};
use rphsa::numerics::{squared_distance, Matrix, RngStream};
use rphsa::optimizer::{run, Algorithm, RphsaConfig, RunRecord};
use rphsa::projection::{build_rp_rbf, generate_projection, jl_distortion, ProjectionKind};
use rphsa::surrogate::{train_rbf, Surrogate, TrainingSet};

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "criterion {criterion:>2} {name}: {status} ({detail})"
    );
}

fn strict() -> bool {
    std::env::var_os("RPHSA_STRICT_REPRODUCTION").is_some()
}

struct Run {
    record: RunRecord,
    eval_count: u64,
}

fn run_seeds(
    id: ProblemId,
    dim: usize,
    algorithm: Algorithm,
    seeds: std::ops::Range<u64>,
    cfg: &RphsaConfig,
) -> Vec<Run> {
    seeds
        .map(|seed| {
            let mut problem = make_problem(id, dim, 0).unwrap();
            let record = run(
                &mut problem,
                &RphsaConfig {
                    seed,
                    ..cfg.clone()
                },
                algorithm,
            )
            .unwrap();
            Run {
                record,
                eval_count: problem.eval_count(),
            }
        })
        .collect()
}

struct Cell {
    rphsa: Vec<Run>,
    baseline: Vec<Run>,
}

impl Cell {
    fn finals(runs: &[Run]) -> Vec<f64> {
        runs.iter().map(|r| r.record.final_fitness()).collect()
    }

    fn mean(runs: &[Run], f: impl Fn(&RunRecord) -> f64) -> f64 {
        runs.iter().map(|r| f(&r.record)).sum::<f64>() / runs.len() as f64
    }

    fn all(&self) -> impl Iterator<Item = &Run> {
        self.rphsa.iter().chain(&self.baseline)
    }
}

fn cell(id: ProblemId, dim: usize, seeds: u64) -> Cell {
    let cfg = RphsaConfig::default();
    Cell {
        rphsa: run_seeds(id, dim, Algorithm::Rphsa, 1..seeds + 1, &cfg),
        baseline: run_seeds(id, dim, Algorithm::Baseline, 1..seeds + 1, &cfg),
    }
}

fn f1_100() -> &'static Cell {
    static CELL: OnceLock<Cell> = OnceLock::new();
    CELL.get_or_init(|| cell(ProblemId::F1, 100, 10))
}

fn f3_100() -> &'static Cell {
    static CELL: OnceLock<Cell> = OnceLock::new();
    CELL.get_or_init(|| cell(ProblemId::F3, 100, 10))
}

fn f4_100() -> &'static Cell {
    static CELL: OnceLock<Cell> = OnceLock::new();
    CELL.get_or_init(|| cell(ProblemId::F4, 100, 10))
}

fn f1_200() -> &'static Cell {
    static CELL: OnceLock<Cell> = OnceLock::new();
    CELL.get_or_init(|| cell(ProblemId::F1, 200, 5))
}

fn identity_pairs() -> &'static Vec<(Run, Run)> {
    static PAIRS: OnceLock<Vec<(Run, Run)>> = OnceLock::new();
    PAIRS.get_or_init(|| {
        let cfg = RphsaConfig {
            k: 30,
            m: Some(1),
            projection: ProjectionKind::Identity,
            budget: 400,
            ..RphsaConfig::default()
        };
        (1..4)
            .map(|seed| {
                let a =
                    run_seeds(ProblemId::F1, 30, Algorithm::Rphsa, seed..seed + 1, &cfg).remove(0);
                let b = run_seeds(ProblemId::F1, 30, Algorithm::Baseline, seed..seed + 1, &cfg)
                    .remove(0);
                (a, b)
            })
            .collect()
    })
}

#[test]
fn criterion_01_interpolation_exactness() {
    let start = Instant::now();
    let mut rng = RngStream::new(2024);
    let mut worst: f64 = 0.0;
    let mut sets = 0;
    let shapes = [10usize, 30, 100]
        .into_iter()
        .flat_map(|d| [10usize, 50, 100].into_iter().map(move |n| (d, n)));
    let shapes: Vec<(usize, usize)> = shapes.collect();
    for t in 0..200 {
        let (d, n) = shapes[t % shapes.len()];
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.uniform_in(-5.0, 5.0)).collect())
            .collect();
        let fitness: Vec<f64> = points.iter().map(|p| ellipsoid(p) + 1.0).collect();
        let data = TrainingSet::from_points(&points, fitness.clone()).unwrap();
        let plain = train_rbf(&data).unwrap();
        let k = d.div_ceil(2);
        let ens = build_rp_rbf(&data, k, 4 * d.div_ceil(k), &mut rng).unwrap();
        for (p, f) in points.iter().zip(&fitness) {
            for pred in [plain.predict(p).unwrap(), ens.predict(p).unwrap()] {
                worst = worst.max((pred - f).abs() / f.abs());
            }
        }
        sets += 1;
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-6 && elapsed < Duration::from_secs(60);
    report(
        1,
        "interpolation exactness",
        pass,
        &format!("{sets} sets, worst relative error {worst:.2e}, {elapsed:.1?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_02_projection_orthonormality() {
    let mut rng = RngStream::new(7);
    let grid: Vec<(usize, usize)> = [5usize, 20, 50]
        .into_iter()
        .flat_map(|k| [50usize, 100, 200].into_iter().map(move |d| (k, d)))
        .collect();
    let mut worst: f64 = 0.0;
    for t in 0..300 {
        let (k, d) = grid[t % grid.len()];
        let p = generate_projection(k, d, &mut rng).unwrap();
        let m = p.matrix();
        // P Pᵀ − I computed entry by entry.
        for i in 0..k {
            for j in 0..k {
                let v: f64 = m.row(i).iter().zip(m.row(j)).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
    }
    let pass = worst < 1e-10;
    report(
        2,
        "projection orthonormality",
        pass,
        &format!("300 matrices, max |PPᵀ - I| = {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_03_jl_distortion() {
    let (d, k, n) = (100, 50, 100);
    let mut fractions = Vec::new();
    for seed in 0..20 {
        let mut rng = RngStream::new(seed);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.uniform()).collect())
            .collect();
        let p = generate_projection(k, d, &mut rng).unwrap();
        // Independent ratio computation.
        let projected: Vec<Vec<f64>> = points
            .iter()
            .map(|x| {
                (0..k)
                    .map(|r| p.matrix().row(r).iter().zip(x).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        let mut inside = 0usize;
        let mut total = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                let ratio = d as f64 / k as f64 * squared_distance(&projected[i], &projected[j])
                    / squared_distance(&points[i], &points[j]);
                inside += usize::from((0.5..=1.5).contains(&ratio));
                total += 1;
            }
        }
        let oracle = inside as f64 / total as f64;
        let x = Matrix::from_columns(&points).unwrap();
        let library = jl_distortion(&p, &x, true)
            .unwrap()
            .fraction_within(0.5, 1.5);
        assert!(
            (oracle - library).abs() <= 1e-3,
            "seed {seed}: {oracle} vs {library}"
        );
        fractions.push(oracle);
    }
    let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
    let pass = mean >= 0.95;
    report(
        3,
        "JL distortion",
        pass,
        &format!("mean fraction in [0.5, 1.5] = {mean:.4} over 20 seeds"),
    );
    assert!(pass);
}

#[test]
fn criterion_04_reduction_identity() {
    let pairs = identity_pairs();
    let mut pass = true;
    for (a, b) in pairs {
        let ha: Vec<(usize, u64)> = a
            .record
            .history
            .iter()
            .map(|h| (h.fe, h.best_f.to_bits()))
            .collect();
        let hb: Vec<(usize, u64)> = b
            .record
            .history
            .iter()
            .map(|h| (h.fe, h.best_f.to_bits()))
            .collect();
        pass &= ha == hb
            && a.record.steps == b.record.steps
            && a.record.final_best == b.record.final_best
            && a.record.nti == b.record.nti;
    }
    report(
        4,
        "reduction identity",
        pass,
        "F1 30-D, identity projection with k = d and m = 1, seeds 1-3",
    );
    assert!(pass);
}

fn conserved(r: &Run, budget: usize) -> bool {
    use rphsa::optimizer::Phase;
    let rec = &r.record;
    let local_steps = rec.steps.iter().filter(|s| s.phase == Phase::Local).count();
    let local_duplicates = rec
        .steps
        .iter()
        .filter(|s| s.phase == Phase::Local && !s.spent_fe)
        .count();
    let init = rec.config.init_size;
    r.eval_count as usize == rec.archive_size
        && local_steps == rec.nls
        && rec.archive_size == init + rec.ngs + rec.nls - local_duplicates
        && rec.archive_size <= budget
        && rec.evaluations() == rec.archive_size
}

fn all_runs() -> Vec<&'static Run> {
    let mut runs: Vec<&Run> = Vec::new();
    for c in [f1_100(), f3_100(), f4_100(), f1_200()] {
        runs.extend(c.all());
    }
    for (a, b) in identity_pairs() {
        runs.push(a);
        runs.push(b);
    }
    runs
}

#[test]
fn criterion_05_fe_conservation() {
    let runs = all_runs();
    let bad = runs
        .iter()
        .filter(|r| !conserved(r, r.record.config.budget))
        .count();
    let at_budget = runs
        .iter()
        .filter(|r| r.record.archive_size == r.record.config.budget)
        .count();
    let pass = bad == 0;
    report(
        5,
        "FE conservation",
        pass,
        &format!(
            "{} runs, {bad} violations, {at_budget} used the full budget",
            runs.len()
        ),
    );
    assert!(pass);
}

/// Two-sided rank-sum p by listing every split of the pooled ranks.
fn brute_force_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let n = pooled.len();
    let observed: f64 = ranks[..a.len()].iter().sum();
    let (mut le, mut ge, mut all) = (0u32, 0u32, 0u32);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let s: f64 = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ranks[i])
            .sum();
        all += 1;
        le += u32::from(s <= observed + 1e-9);
        ge += u32::from(s >= observed - 1e-9);
    }
    (2.0 * le.min(ge) as f64 / all as f64).min(1.0)
}

#[test]
fn criterion_06_monotone_histories_and_exact_wilcoxon() {
    let runs = all_runs();
    let non_monotone = runs
        .iter()
        .filter(|r| {
            r.record
                .history
                .windows(2)
                .any(|w| w[1].best_f > w[0].best_f)
        })
        .count();

    // Every 3-vs-3 sample over values 0..5 and every 4-vs-4 sample over 0..4.
    let mut cases = 0usize;
    let mut mismatches = 0usize;
    for (size, levels) in [(3usize, 5usize), (4, 4)] {
        let total = levels.pow(2 * size as u32);
        for code in 0..total {
            let mut c = code;
            let values: Vec<f64> = (0..2 * size)
                .map(|_| {
                    let v = c % levels;
                    c /= levels;
                    v as f64
                })
                .collect();
            let (a, b) = values.split_at(size);
            cases += 1;
            match wilcoxon_ranksum(a, b) {
                Ok(t) => {
                    if !t.exact || (t.p - brute_force_p(a, b)).abs() > 1e-12 {
                        mismatches += 1;
                    }
                }
                Err(rphsa::Error::DegenerateSamples) => {
                    if values.iter().any(|&v| v != values[0]) {
                        mismatches += 1;
                    }
                }
                Err(_) => mismatches += 1,
            }
        }
    }
    let pass = non_monotone == 0 && mismatches == 0;
    report(
        6,
        "monotone histories and exact Wilcoxon",
        pass,
        &format!(
            "{} runs, {non_monotone} non-monotone; {cases} small-sample cases, {mismatches} mismatches",
            runs.len()
        ),
    );
    assert!(pass);
}

fn reproduction(criterion: u32, name: &str, pass: bool, detail: String) {
    report(criterion, name, pass, &detail);
    if strict() {
        assert!(pass, "criterion {criterion}: {detail}");
    }
}

#[test]
fn criterion_07_f1_100d_quality() {
    let c = f1_100();
    let (a, b) = (Cell::finals(&c.rphsa), Cell::finals(&c.baseline));
    let (ma, mb) = (
        Cell::mean(&c.rphsa, RunRecord::final_fitness),
        Cell::mean(&c.baseline, RunRecord::final_fitness),
    );
    let p = wilcoxon_ranksum(&a, &b).unwrap().p;
    let pass = (3.5..=350.0).contains(&ma) && mb > ma && p < 0.05;
    reproduction(
        7,
        "F1 100-D quality",
        pass,
        format!(
            "rphsa mean {ma:.4e}, baseline mean {mb:.4e}, p = {p:.3e}, verdict {}",
            verdict(&a, &b, p)
        ),
    );
}

#[test]
fn criterion_08_f3_100d_quality() {
    let c = f3_100();
    let (ma, mb) = (
        Cell::mean(&c.rphsa, RunRecord::final_fitness),
        Cell::mean(&c.baseline, RunRecord::final_fitness),
    );
    let pass = ma < 6.0 && mb > ma;
    reproduction(
        8,
        "F3 100-D quality",
        pass,
        format!("rphsa mean {ma:.4e}, baseline mean {mb:.4e}"),
    );
}

#[test]
fn criterion_09_local_search_efficiency() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, c) in [("F1", f1_100()), ("F4", f4_100())] {
        let ra = Cell::mean(&c.rphsa, RunRecord::nti_over_nls);
        let rb = Cell::mean(&c.baseline, RunRecord::nti_over_nls);
        pass &= ra > rb;
        detail.push(format!("{name}: rphsa NTI/NLS {ra:.3}, baseline {rb:.3}"));
    }
    reproduction(9, "local-search efficiency", pass, detail.join("; "));
}

#[test]
fn criterion_10_accuracy_probe() {
    let reports: Vec<ProbeReport> = (1..11)
        .map(|seed| {
            let mut problem = make_problem(ProblemId::F1, 100, 0).unwrap();
            accuracy_probe(
                &mut problem,
                &RphsaConfig {
                    seed,
                    ..RphsaConfig::default()
                },
            )
            .unwrap()
        })
        .collect();
    let wins = reports
        .iter()
        .filter(|r| r.rp_rbf_at_least_as_good())
        .count();
    let pairs: Vec<String> = reports
        .iter()
        .map(|r| format!("{:.2}/{:.2}", r.spearman_rp_rbf, r.spearman_plain))
        .collect();
    reproduction(
        10,
        "accuracy probe",
        wins >= 7,
        format!(
            "rp-rbf >= plain in {wins}/10 probes; rp/plain spearman {}",
            pairs.join(" ")
        ),
    );
}

#[test]
fn criterion_11_scalability_direction() {
    let c = f1_200();
    let (ma, mb) = (
        Cell::mean(&c.rphsa, RunRecord::final_fitness),
        Cell::mean(&c.baseline, RunRecord::final_fitness),
    );
    reproduction(
        11,
        "F1 200-D direction",
        ma < mb,
        format!("rphsa mean {ma:.4e}, baseline mean {mb:.4e}"),
    );
}
