//! Experiment tooling: seeded campaigns, rank statistics, accuracy probes,
//! parameter sweeps, convergence plots and result comparison.

pub mod campaign;
pub mod compare;
pub mod plot;
pub mod probe;
pub mod stats;
pub mod sweep;

pub use campaign::{
    execute_campaign, run_campaign, Campaign, CampaignReport, CellSummary, ProblemSpec,
};
pub use compare::{compare, format_table, CompareRow};
pub use plot::{emit_convergence_plot, load_series, series_from_dir, Series};
pub use probe::{accuracy_probe, ProbeReport, ProbeRow};
pub use stats::{spearman, wilcoxon_ranksum, RankSumTest};
pub use sweep::{sweep, write_sweep_csv, SweepCell, SweepRequest};
