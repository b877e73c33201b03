//! Dominance machinery and solution-set quality indicators.
//!
//! Everything here works on the bi-objective risk/return space. Internally
//! the canonical minimization form `(risk, -return)` is used for every
//! comparison.

mod dominance;
mod indicators;
mod point;
mod quality;

pub(crate) use dominance::crowding_minimization as dominance_crowding;
pub(crate) use indicators::igd_plus_minimization;
pub use dominance::{
    crowding_distance, dominates, dominates_min, nondominated_sort, pareto_indices,
    rank_minimization,
};
pub use indicators::{gd_plus, hypervolume, igd_plus, plus_distance, DEFAULT_HV_REFERENCE};
pub use point::{FrontierSet, ObjectivePoint};
pub use quality::{first_success, quality_indicators, HistoryRecord, QualityIndicators, RunHistory};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("non-finite objective value ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("empty point set")]
    Empty,
    #[error("success threshold {0} outside (0, 1]")]
    InvalidThreshold(f64),
    #[error("reference hypervolume must be positive, got {0}")]
    InvalidReferenceHv(f64),
    #[error("history evaluations must be strictly increasing ({previous} then {next})")]
    NonIncreasingEvaluations { previous: usize, next: usize },
    #[error("run history is empty")]
    EmptyHistory,
}
