//! Mean final fitness over a grid of subspace dimensions and local training
//! sizes, written as CSV.
//!
//! ```text
//! cargo run --release --example parameter_sweep -- 2 sweep.csv
//! ```

use std::fs::File;
use std::path::Path;

use rphsa::benchmarks::ProblemId;
use rphsa::harness::{sweep, write_sweep_csv, ProblemSpec, SweepCell, SweepRequest};
use rphsa::optimizer::RphsaConfig;

pub fn run_example(req: &SweepRequest, out: &Path) -> rphsa::Result<Vec<SweepCell>> {
    let cells = sweep(req)?;
    print!("{:>6}", "k \\ n");
    for n in &req.n_values {
        print!("{n:>12}");
    }
    println!();
    for row in cells.chunks(req.n_values.len()) {
        print!("{:>6}", row[0].k);
        for c in row {
            let mark = if c.default { "*" } else { " " };
            print!("{:>11.3e}{mark}", c.mean);
        }
        println!();
    }
    write_sweep_csv(&cells, File::create(out)?)?;
    println!("(* default setting)  grid written to {}", out.display());
    Ok(cells)
}

#[allow(dead_code)]
fn main() -> rphsa::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let runs = args.first().and_then(|s| s.parse().ok()).unwrap_or(2);
    let out = args.get(1).map_or("sweep.csv", String::as_str);
    let req = SweepRequest {
        problem: ProblemSpec {
            id: ProblemId::F1,
            dim: 100,
            data_seed: 0,
        },
        k_values: vec![20, 30, 40, 50, 60],
        n_values: vec![50, 100, 150, 200],
        runs,
        budget: 1000,
        base_seed: 1,
        base: RphsaConfig::default(),
    };
    run_example(&req, Path::new(out)).map(|_| ())
}
