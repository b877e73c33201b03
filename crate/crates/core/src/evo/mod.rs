//! Ask/tell evolutionary engines.
//!
//! [`EAState`] owns the population and its random generator. Callers ask
//! for candidates with [`EAState::infill`], evaluate them however they
//! like, and hand the evaluated individuals back with [`EAState::advance`].
//! Survival is either NSGA-II (rank, then crowding distance) or R-NSGA-II
//! (rank, then reference-point distance with epsilon clearing).

mod candidate;
mod operators;
mod state;
mod survival;

pub use candidate::{Candidate, CandidateId, Individual, GENE_QUANTUM};
pub use operators::{lhs_init, polynomial_mutation, tournament_select, uniform_crossover};
pub use state::{EAConfig, EAState, Survival, VariationConfig};
pub use survival::{nsga2_survival, rnsga2_survival};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvoError {
    #[error("gene {index} = {value} outside [0, 1]")]
    GeneOutOfRange { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("probability {0} outside [0, 1]")]
    InvalidRate(f64),
    #[error("distribution index must be positive, got {0}")]
    InvalidEta(f64),
    #[error("selection pool is empty")]
    EmptyPool,
    #[error("individual lacks rank or crowding distance")]
    MissingRankOrCrowding,
    #[error("individual lacks objectives")]
    MissingObjectives,
    #[error("count must be at least 1")]
    InvalidCount,
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("reference point set is empty")]
    NoReferencePoints,
}
