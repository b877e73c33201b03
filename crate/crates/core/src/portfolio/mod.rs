//! Single- and multi-period mean-variance portfolio optimization with
//! trading and holding costs.
//!
//! Weights have `n + 1` entries: `n` risky assets followed by cash. The
//! per-period problem maximizes
//!
//! ```text
//! mu'w - gamma/2 w'Sigma w - gamma_trade * phi_trade(w - w_prev) - gamma_hold * phi_hold(w)
//! ```
//!
//! subject to `w'1 = 1` and per-coordinate bounds. The multi-period problem
//! sums this over the horizon, with each period trading from the previous
//! one.

mod costs;
mod prox;
mod solver;
mod types;

pub use costs::{phi_hold, phi_trade};
pub use solver::{
    objective_value, solve_mpo, solve_mpo_with, solve_spo, MpoSolution, SolverSettings, WarmStart,
};
pub use types::{ConstraintSet, CostParams, PeriodForecast, PortfolioState, TradeOffParams};

use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PortfolioError {
    #[error("weights sum to {0}, expected 1")]
    BudgetViolated(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("covariance asymmetric by {0:e}")]
    Asymmetric(f64),
    #[error("covariance cash row/column must be zero")]
    CashRisk,
    #[error("negative volume {0}")]
    NegativeVolume(f64),
    #[error("invalid parameter {0}")]
    InvalidParameter(&'static str),
    #[error("constraint set is infeasible")]
    Infeasible,
    #[error("horizon must be at least one period")]
    EmptyHorizon,
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<PortfolioState>,
    },
}
