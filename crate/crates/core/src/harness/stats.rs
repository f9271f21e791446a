//! Rank statistics for comparing runs.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Significance level of the verdicts.
pub const ALPHA: f64 = 0.05;

/// Largest per-side sample size handled by exact enumeration.
pub const EXACT_LIMIT: usize = 8;

/// Outcome of a two-sided Wilcoxon rank-sum test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankSumTest {
    /// Sum of the midranks of the first sample.
    pub statistic: f64,
    pub p: f64,
    pub exact: bool,
}

/// Midranks (1-based) of `values`; ties share the mean of their positions.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Two-sided rank-sum test of `a` against `b`.
///
/// Uses exact enumeration of the rank-sum distribution (midranks included)
/// when both samples have at most [`EXACT_LIMIT`] values, and otherwise the
/// normal approximation with tie and continuity corrections.
pub fn wilcoxon_ranksum(a: &[f64], b: &[f64]) -> Result<RankSumTest> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(Error::SampleTooSmall(s.len()));
        }
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    if let Some(v) = pooled.iter().find(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput(format!(
            "non-finite sample value {v}"
        )));
    }
    if pooled.iter().all(|&v| v == pooled[0]) {
        return Err(Error::DegenerateSamples);
    }
    let ranks = midranks(&pooled);
    let statistic: f64 = ranks[..a.len()].iter().sum();

    if a.len() <= EXACT_LIMIT && b.len() <= EXACT_LIMIT {
        let p = exact_p(&ranks, a.len(), statistic);
        return Ok(RankSumTest {
            statistic,
            p,
            exact: true,
        });
    }

    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n = na + nb;
    let mean = na * (n + 1.0) / 2.0;
    let ties = tie_term(&pooled);
    let var = na * nb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    let z = ((statistic - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::standard();
    let p = (2.0 * (1.0 - normal.cdf(z))).min(1.0);
    Ok(RankSumTest {
        statistic,
        p,
        exact: false,
    })
}

/// Σ (t³ − t) over groups of tied values.
fn tie_term(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        total += t * t * t - t;
        i = j + 1;
    }
    total
}

/// Exact two-sided p of the rank sum of `na` values drawn from `ranks`.
fn exact_p(ranks: &[f64], na: usize, statistic: f64) -> f64 {
    // Midranks are multiples of 1/2, so doubled ranks are integers.
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    // counts[j][s]: subsets of size j with doubled sum s.
    let mut counts = vec![vec![0u64; total + 1]; na + 1];
    counts[0][0] = 1;
    for &r in &doubled {
        for j in (1..=na).rev() {
            for s in (r..=total).rev() {
                counts[j][s] += counts[j - 1][s - r];
            }
        }
    }
    let w = (2.0 * statistic).round() as usize;
    let all: u64 = counts[na].iter().sum();
    let lower: u64 = counts[na][..=w].iter().sum();
    let upper: u64 = counts[na][w..].iter().sum();
    (2.0 * lower.min(upper) as f64 / all as f64).min(1.0)
}

/// "+" when `a` is significantly smaller (better) than `b`, "-" when
/// significantly larger, "=" otherwise.
pub fn verdict(a: &[f64], b: &[f64], p: f64) -> &'static str {
    if p.is_nan() || p >= ALPHA {
        return "=";
    }
    let rank_a: f64 = {
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        midranks(&pooled)[..a.len()].iter().sum::<f64>() / a.len() as f64
    };
    let expected = (a.len() + b.len() + 1) as f64 / 2.0;
    if rank_a < expected {
        "+"
    } else {
        "-"
    }
}

/// Spearman rank correlation; NaN when either input is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "spearman needs paired samples");
    pearson(&midranks(x), &midranks(y))
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;
    use approx::assert_abs_diff_eq;

    /// Two-sided p by listing every split of the pooled ranks.
    fn brute_force_p(a: &[f64], b: &[f64]) -> f64 {
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        let ranks = midranks(&pooled);
        let n = pooled.len();
        let observed: f64 = ranks[..a.len()].iter().sum();
        let (mut le, mut ge, mut all) = (0usize, 0usize, 0usize);
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != a.len() {
                continue;
            }
            let s: f64 = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| ranks[i])
                .sum();
            all += 1;
            if s <= observed + 1e-9 {
                le += 1;
            }
            if s >= observed - 1e-9 {
                ge += 1;
            }
        }
        (2.0 * le.min(ge) as f64 / all as f64).min(1.0)
    }

    #[test]
    fn midranks_average_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn separated_three_vs_three() {
        let t = wilcoxon_ranksum(&[1.0, 2.0, 3.0], &[10.0, 11.0, 12.0]).unwrap();
        assert!(t.exact);
        assert_eq!(t.statistic, 6.0);
        assert_abs_diff_eq!(t.p, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(
            t.p,
            brute_force_p(&[1.0, 2.0, 3.0], &[10.0, 11.0, 12.0]),
            epsilon = 1e-12
        );
    }

    #[test]
    fn exact_matches_enumeration_on_small_integer_samples() {
        let mut rng = RngStream::new(5);
        for size in [3usize, 4] {
            for _ in 0..200 {
                let a: Vec<f64> = (0..size).map(|_| rng.index(6) as f64).collect();
                let b: Vec<f64> = (0..size).map(|_| rng.index(6) as f64).collect();
                match wilcoxon_ranksum(&a, &b) {
                    Ok(t) => assert_abs_diff_eq!(t.p, brute_force_p(&a, &b), epsilon = 1e-12),
                    Err(Error::DegenerateSamples) => {
                        assert!(a.iter().chain(&b).all(|&v| v == a[0]))
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn identical_multisets_are_not_separated() {
        let a: Vec<f64> = (0..12).map(f64::from).collect();
        let t = wilcoxon_ranksum(&a, &a).unwrap();
        assert!(!t.exact);
        assert!(t.p > 0.9);
        let small = [1.0, 2.0, 3.0, 4.0];
        assert!(wilcoxon_ranksum(&small, &small).unwrap().p > 0.9);
    }

    #[test]
    fn shifted_normals_are_separated() {
        for seed in 0..20 {
            let mut rng = RngStream::new(seed);
            let a: Vec<f64> = (0..30).map(|_| rng.gaussian()).collect();
            let b: Vec<f64> = (0..30).map(|_| rng.gaussian() + 3.0).collect();
            let t = wilcoxon_ranksum(&a, &b).unwrap();
            assert!(t.p < 1e-3, "seed {seed}: p = {}", t.p);
            assert_eq!(verdict(&a, &b, t.p), "+");
            assert_eq!(verdict(&b, &a, t.p), "-");
        }
    }

    #[test]
    fn normal_mode_matches_reference_value() {
        // Rank sum 55 for 10 vs 10 fully separated samples.
        let a: Vec<f64> = (0..10).map(f64::from).collect();
        let b: Vec<f64> = (10..20).map(f64::from).collect();
        let t = wilcoxon_ranksum(&a, &b).unwrap();
        assert_eq!(t.statistic, 55.0);
        // z = (105 - 55 - 0.5) / sqrt(175)
        let z: f64 = 49.5 / 175f64.sqrt();
        let p = 2.0 * (1.0 - Normal::standard().cdf(z));
        assert_abs_diff_eq!(t.p, p, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_and_small_inputs() {
        assert!(matches!(
            wilcoxon_ranksum(&[1.0, 1.0], &[1.0, 1.0, 1.0]),
            Err(Error::DegenerateSamples)
        ));
        assert!(matches!(
            wilcoxon_ranksum(&[1.0], &[2.0, 3.0]),
            Err(Error::SampleTooSmall(1))
        ));
    }

    #[test]
    fn verdict_is_equal_iff_not_significant() {
        let a = [1.0, 2.0, 3.0];
        let b = [10.0, 11.0, 12.0];
        assert_eq!(verdict(&a, &b, 0.05), "=");
        assert_eq!(verdict(&a, &b, 0.049), "+");
    }

    #[test]
    fn spearman_extremes() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_abs_diff_eq!(
            spearman(&x, &[10.0, 20.0, 25.0, 100.0]),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(spearman(&x, &[4.0, 3.0, 2.0, 1.0]), -1.0, epsilon = 1e-12);
        assert!(spearman(&x, &[1.0; 4]).is_nan());
    }

    #[test]
    fn sample_std() {
        let (m, s) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_abs_diff_eq!(m, 5.0);
        assert_abs_diff_eq!(s, (32.0f64 / 7.0).sqrt(), epsilon = 1e-12);
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
    }
}
