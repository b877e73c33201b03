//! Experiment harness for `parden-core`: market and result files, the
//! backtest evaluator, random and grid baselines, repeated experiments and
//! their statistics. The `parden` binary is a thin CLI over this library.

pub mod baselines;
pub mod evaluator;
pub mod experiment;
pub mod files;
pub mod market;
pub mod report;
pub mod spec;

pub use baselines::{grid_lattice, grid_search, random_search, random_search_run, sequence_run};
pub use evaluator::BacktestEvaluator;
pub use experiment::{run_experiment, run_method, ExperimentError, ExperimentOutput, IndicatorRow, RunStatus};
pub use report::{Indicator, StatsReport, StatsRow};
pub use spec::{ExperimentSpec, Method};

/// Version string written into summaries.
pub fn version() -> String {
    format!("parden-bench v{}", env!("CARGO_PKG_VERSION"))
}
