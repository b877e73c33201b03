//! Surrogate-assisted multi-objective search over portfolio trade-off
//! parameters.
//!
//! The crate is `no_std` (it needs `alloc`) so the numerical core can be
//! embedded anywhere; file formats, the experiment harness and the CLI live
//! in the `parden-bench` companion crate.
//!
//! Module map:
//!
//! | module | contents |
//! |---|---|
//! | [`metrics`] | dominance, non-dominated sorting, crowding, HV / GD+ / IGD+, SR / AESR / AGSR |
//! | [`evo`] | ask/tell NSGA-II and R-NSGA-II with LHS, uniform crossover, polynomial mutation |
//! | [`surrogate`] | bagged regression trees, Kendall tau-b, cross-validated NDScore |
//! | [`search`] | the surrogate-assisted driver: archive, reservoir look-ahead, acceptance fill |
//! | [`portfolio`] | single/multi-period mean-variance optimizer with trading and holding costs |
//! | [`backtest`] | forecasts, rolling-horizon simulation, synthetic markets |
//! | [`stats`] | one-sided Mann-Whitney U and Hochberg step-up adjustment |
#![no_std]
// When std is anywhere in the build graph its inherent float methods shadow
// `num_traits::Float`, which then looks unused.
#![allow(unused_imports)]
// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod backtest;
pub mod evo;
pub mod linalg;
pub mod metrics;
pub mod portfolio;
pub mod search;
pub mod stats;
pub mod surrogate;

pub use metrics::{FrontierSet, ObjectivePoint, RunHistory};
