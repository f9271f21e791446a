//! Rank-sum comparison of two result directories.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::campaign::{compare_finals, read_summary, CellSummary};
use crate::benchmarks::ProblemId;
use crate::error::{Error, Result};
use crate::optimizer::Algorithm;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub problem: ProblemId,
    pub dim: usize,
    pub first: Algorithm,
    pub first_mean: f64,
    pub second: Algorithm,
    pub second_mean: f64,
    pub p: Option<f64>,
    /// Relative to the first directory: "+" means it is significantly better.
    pub verdict: String,
}

/// Pairs every cell of `first` with the cell of `second` on the same problem.
pub fn compare_summaries(first: &[CellSummary], second: &[CellSummary]) -> Vec<CompareRow> {
    let mut rows = Vec::new();
    for a in first {
        for b in second
            .iter()
            .filter(|b| b.problem == a.problem && b.dim == a.dim)
        {
            let test = compare_finals(&a.finals, &b.finals);
            rows.push(CompareRow {
                problem: a.problem,
                dim: a.dim,
                first: a.algorithm,
                first_mean: a.mean,
                second: b.algorithm,
                second_mean: b.mean,
                p: test.map(|t| t.0),
                verdict: test.map_or("n/a", |t| t.1).to_string(),
            });
        }
    }
    rows
}

pub fn compare(first: &Path, second: &Path) -> Result<Vec<CompareRow>> {
    let rows = compare_summaries(&read_summary(first)?, &read_summary(second)?);
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(rows)
}

/// Fixed-width text table of `rows`.
pub fn format_table(rows: &[CompareRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<8}{:>6}  {:<10}{:>14}  {:<10}{:>14}{:>12}  verdict",
        "problem", "dim", "first", "mean", "second", "mean", "p"
    );
    for r in rows {
        let p = r.p.map_or_else(|| "-".to_string(), |p| format!("{p:.4e}"));
        let _ = writeln!(
            out,
            "{:<8}{:>6}  {:<10}{:>14.4e}  {:<10}{:>14.4e}{:>12}  {}",
            r.problem.to_string(),
            r.dim,
            r.first.to_string(),
            r.first_mean,
            r.second.to_string(),
            r.second_mean,
            p,
            r.verdict
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::campaign::write_summary;

    fn cell(algorithm: Algorithm, finals: Vec<f64>) -> CellSummary {
        let n = finals.len() as f64;
        CellSummary {
            problem: ProblemId::F1,
            dim: 100,
            algorithm,
            runs: finals.len(),
            mean: finals.iter().sum::<f64>() / n,
            std: 0.0,
            finals,
            nls_mean: 0.0,
            nti_mean: 0.0,
            nti_over_nls: 0.0,
            wilcoxon: None,
            failures: vec![],
        }
    }

    #[test]
    fn directories_are_paired_by_problem() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        write_summary(a.path(), &[cell(Algorithm::Rphsa, vec![1.0, 2.0, 3.0])]).unwrap();
        write_summary(
            b.path(),
            &[cell(Algorithm::Baseline, vec![10.0, 11.0, 12.0])],
        )
        .unwrap();
        let rows = compare(a.path(), b.path()).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].p.unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(rows[0].verdict, "=");
        let table = format_table(&rows);
        assert_eq!(table.lines().count(), 2);
        assert!(table.contains("rphsa"));
    }

    #[test]
    fn significant_difference() {
        let good: Vec<f64> = (0..10).map(f64::from).collect();
        let bad: Vec<f64> = (20..30).map(f64::from).collect();
        let rows = compare_summaries(
            &[cell(Algorithm::Rphsa, good)],
            &[cell(Algorithm::Baseline, bad)],
        );
        assert_eq!(rows[0].verdict, "+");
    }
}
