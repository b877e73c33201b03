//! Surrogate models of the backtest objectives and the cross-validated
//! non-dominated score (NDScore) that measures how faithfully a surrogate
//! reproduces non-dominating ranks.

mod dataset;
mod forest;
mod kendall;
mod ndscore;
mod tree;

pub use dataset::Dataset;
pub use forest::{BaggedTrees, ForestModel};
pub use kendall::kendall_tau_b;
pub use ndscore::{nd_score, ranks_of};
pub use tree::RegressionTree;

use alloc::vec::Vec;
use thiserror::Error;

use crate::evo::Candidate;
use crate::ObjectivePoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurrogateError {
    #[error("dataset has {0} rows; at least {1} required")]
    TooFewRows(usize, usize),
    #[error("inputs ({0}) and targets ({1}) differ in length")]
    LengthMismatch(usize, usize),
    #[error("duplicate candidate at row {0}")]
    DuplicateCandidate(usize),
    #[error("input dimension {got} does not match the training dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rank vectors need equal length of at least 2 (got {0} and {1})")]
    BadRankLength(usize, usize),
    #[error("Kendall tau-b undefined: one rank vector is constant")]
    DegenerateRanks,
    #[error("fold count must be at least 1")]
    BadFoldCount,
    #[error("surrogate produced a non-finite prediction")]
    NonFinitePrediction,
}

/// A fitted, immutable objective predictor.
pub trait Surrogate {
    /// Gene dimension the model was trained on.
    fn dimension(&self) -> usize;

    fn predict_one(&self, genes: &[f64]) -> Result<ObjectivePoint, SurrogateError>;

    fn predict(&self, xs: &[Candidate]) -> Result<Vec<ObjectivePoint>, SurrogateError> {
        xs.iter()
            .map(|c| {
                if c.dim() != self.dimension() {
                    return Err(SurrogateError::DimensionMismatch {
                        expected: self.dimension(),
                        got: c.dim(),
                    });
                }
                self.predict_one(c.genes())
            })
            .collect()
    }
}

/// A learner that fits [`Surrogate`]s; the search driver is generic over it
/// so alternative model families can be plugged in.
pub trait SurrogateFamily {
    type Model: Surrogate;

    fn fit(&self, data: &Dataset, seed: u64) -> Result<Self::Model, SurrogateError>;
}
