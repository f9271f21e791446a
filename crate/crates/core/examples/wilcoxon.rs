//! Rank-sum tests on hand-made samples: the exact small-sample mode and the
//! normal approximation.
//!
//! ```text
//! cargo run --example wilcoxon
//! ```

use rphsa::harness::stats::verdict;
use rphsa::harness::{wilcoxon_ranksum, RankSumTest};

pub fn run_example() -> rphsa::Result<Vec<RankSumTest>> {
    let cases: [(&str, Vec<f64>, Vec<f64>); 3] = [
        (
            "3 vs 3, separated",
            vec![1.0, 2.0, 3.0],
            vec![10.0, 11.0, 12.0],
        ),
        (
            "4 vs 4, with ties",
            vec![1.0, 2.0, 2.0, 5.0],
            vec![2.0, 4.0, 6.0, 7.0],
        ),
        (
            "12 vs 12, shifted",
            (0..12).map(|i| f64::from(i) * 0.5).collect(),
            (0..12).map(|i| 3.0 + f64::from(i) * 0.5).collect(),
        ),
    ];
    let mut out = Vec::new();
    for (name, a, b) in cases {
        let t = wilcoxon_ranksum(&a, &b)?;
        let mode = if t.exact { "exact" } else { "normal" };
        println!(
            "{name:<20} W = {:>6.1}  p = {:.4}  ({mode})  verdict {}",
            t.statistic,
            t.p,
            verdict(&a, &b, t.p)
        );
        out.push(t);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    run_example().map(|_| ())
}
