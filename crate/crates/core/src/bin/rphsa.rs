use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rphsa::benchmarks::{make_problem, ProblemId};
use rphsa::harness::{
    accuracy_probe, compare, emit_convergence_plot, format_table, run_campaign, series_from_dir,
    sweep, write_sweep_csv, Campaign, ProblemSpec, SweepRequest,
};
use rphsa::optimizer::{Algorithm, RphsaConfig};

#[derive(Parser)]
#[command(
    name = "rphsa",
    version,
    about = "Random-projection surrogate-assisted optimization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a campaign and write per-run CSVs plus summary.json.
    Run(RunArgs),
    /// Mean final fitness over a grid of k and n values.
    Sweep(SweepArgs),
    /// Compare plain and projected local models on a mid-run population.
    Probe(ProbeArgs),
    /// Render convergence curves of a result directory as SVG.
    Plot(PlotArgs),
    /// Rank-sum table for two result directories.
    Compare(CompareArgs),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value = "F1")]
    function: ProblemId,
    #[arg(long, default_value_t = 100)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    k: usize,
    #[arg(long = "n-local", default_value_t = 100)]
    n_local: usize,
    /// Number of subspaces; defaults to 4 * ceil(dim / k).
    #[arg(long)]
    m: Option<usize>,
}

impl Common {
    fn config(&self) -> RphsaConfig {
        RphsaConfig {
            k: self.k,
            n_local: self.n_local,
            m: self.m,
            budget: self.budget,
            seed: self.seed,
            ..RphsaConfig::default()
        }
    }

    fn problem(&self) -> ProblemSpec {
        ProblemSpec {
            id: self.function,
            dim: self.dim,
            data_seed: 0,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 30)]
    runs: usize,
    /// Comma-separated list of rphsa, baseline.
    #[arg(long, default_value = "rphsa,baseline", value_delimiter = ',')]
    algo: Vec<Algorithm>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Campaign JSON; replaces all other flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long, value_delimiter = ',', default_value = "20,30,40,50,60")]
    k_values: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "50,100,150,200")]
    n_values: Vec<usize>,
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    common: Common,
    /// Number of consecutive seeds to probe.
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Directory for one CSV per probe.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Result directory written by `run`.
    dir: PathBuf,
    #[arg(long, default_value = "convergence.svg")]
    out: PathBuf,
    #[arg(long)]
    log: bool,
}

#[derive(Args)]
struct CompareArgs {
    first: PathBuf,
    second: PathBuf,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> rphsa::Result<ExitCode> {
    match command {
        Command::Run(args) => {
            let campaign = match &args.config {
                Some(path) => Campaign::from_json_file(path)?,
                None => Campaign {
                    problems: vec![args.common.problem()],
                    algorithms: args.algo.clone(),
                    runs_per_cell: args.runs,
                    budget: args.common.budget,
                    base_seed: args.common.seed,
                    config: args.common.config(),
                    out_dir: args.out.clone(),
                },
            };
            let report = run_campaign(&campaign)?;
            for cell in &report.cells {
                let w = cell
                    .wilcoxon
                    .as_ref()
                    .map(|w| format!("vs {}: p = {:.3e} ({})", w.vs, w.p, w.verdict))
                    .unwrap_or_default();
                println!(
                    "{} {}-D {:<8} runs {:>3}  mean {:.4e}  std {:.4e}  NTI/NLS {:.3}  {w}",
                    cell.problem,
                    cell.dim,
                    cell.algorithm,
                    cell.runs,
                    cell.mean,
                    cell.std,
                    cell.nti_over_nls
                );
                for f in &cell.failures {
                    eprintln!(
                        "run {} of {} {} failed: {}",
                        f.run, cell.problem, cell.algorithm, f.error
                    );
                }
            }
            println!("results written to {}", campaign.out_dir.display());
            Ok(if report.failed_runs() > 0 {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Sweep(args) => {
            let cells = sweep(&SweepRequest {
                problem: args.common.problem(),
                k_values: args.k_values,
                n_values: args.n_values,
                runs: args.runs,
                budget: args.common.budget,
                base_seed: args.common.seed,
                base: args.common.config(),
            })?;
            for c in &cells {
                let flag = if c.default { "  (default)" } else { "" };
                println!(
                    "k {:>3}  n {:>4}  m {:>3}  mean {:.4e}{flag}",
                    c.k, c.n_local, c.m, c.mean
                );
            }
            write_sweep_csv(&cells, BufWriter::new(File::create(&args.out)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Probe(args) => {
            if let Some(dir) = &args.out {
                fs::create_dir_all(dir)?;
            }
            let mut wins = 0;
            for i in 0..args.runs {
                let seed = args.common.seed + i as u64;
                let mut problem = make_problem(args.common.function, args.common.dim, 0)?;
                let cfg = RphsaConfig {
                    seed,
                    ..args.common.config()
                };
                let report = accuracy_probe(&mut problem, &cfg)?;
                wins += usize::from(report.rp_rbf_at_least_as_good());
                println!(
                    "seed {seed}: captured at FE {}  spearman plain {:.3}  rp-rbf {:.3}",
                    report.fe, report.spearman_plain, report.spearman_rp_rbf
                );
                if let Some(dir) = &args.out {
                    let file = File::create(dir.join(format!("probe_seed{seed}.csv")))?;
                    report.write_csv(BufWriter::new(file))?;
                }
            }
            println!(
                "rp-rbf at least as accurate in {wins} of {} probes",
                args.runs
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot(args) => {
            let series = series_from_dir(&args.dir)?;
            emit_convergence_plot(&series, &args.out, args.log)?;
            println!("{} series written to {}", series.len(), args.out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare(args) => {
            print!("{}", format_table(&compare(&args.first, &args.second)?));
            Ok(ExitCode::SUCCESS)
        }
    }
}
