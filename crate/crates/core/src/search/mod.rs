//! Surrogate-assisted search driver: warm start, ground-truth archive,
//! surrogate refits, acceptance-sampled fill and reservoir-sampled
//! look-ahead.

mod archive;
mod driver;
mod lookahead;
mod reservoir;
mod termination;

pub use archive::GroundTruthArchive;
pub use driver::{run, run_bare_ea, GenerationReport, SearchOutcome};
pub use lookahead::{acceptance_fill, look_ahead, reservoir_capacity, LookAheadParams};
pub use reservoir::{reservoir_update, Reservoir};
pub use termination::moo_space_termination;

use alloc::boxed::Box;
use alloc::string::String;
use thiserror::Error;

use crate::evo::{Candidate, EvoError};
use crate::metrics::{MetricsError, ObjectivePoint, RunHistory, DEFAULT_HV_REFERENCE};
use crate::surrogate::SurrogateError;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Maximum number of simulator evaluations.
    pub budget: usize,
    /// Warm-start size; must match the engine's population size.
    pub population: usize,
    /// Candidates proposed per generation; must match the engine.
    pub offspring: usize,
    pub acceptance: bool,
    pub look_ahead: bool,
    pub look_ahead_tolerance: f64,
    pub look_ahead_window: usize,
    pub look_ahead_max_generations: usize,
    /// Acceptance sampling gives up after this many draws per open slot.
    pub acceptance_draw_cap_factor: usize,
    pub k_folds: usize,
    /// Seeds the surrogate, scoring, reservoir and acceptance draws.
    pub seed: u64,
    pub hv_reference: ObjectivePoint,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: 510,
            population: 60,
            offspring: 30,
            acceptance: false,
            look_ahead: false,
            look_ahead_tolerance: 1e-4,
            look_ahead_window: 5,
            look_ahead_max_generations: 100,
            acceptance_draw_cap_factor: 10,
            k_folds: 5,
            seed: 0,
            hv_reference: DEFAULT_HV_REFERENCE,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.population == 0 || self.offspring == 0 {
            return Err(SearchError::Config("population and offspring must be positive"));
        }
        if self.budget < self.population {
            return Err(SearchError::Config("budget must cover the warm start"));
        }
        if !(self.look_ahead_tolerance > 0.0) {
            return Err(SearchError::Config("look-ahead tolerance must be positive"));
        }
        if self.look_ahead_window < 2 || self.look_ahead_max_generations == 0 {
            return Err(SearchError::Config("look-ahead window >= 2 and max generations >= 1"));
        }
        if self.acceptance_draw_cap_factor == 0 || self.k_folds == 0 {
            return Err(SearchError::Config("draw cap factor and folds must be positive"));
        }
        if (self.acceptance || self.look_ahead) && self.population < 2 * self.k_folds {
            return Err(SearchError::Config("warm start too small for the fold count"));
        }
        Ok(())
    }
}

/// Failure reported by an [`Evaluator`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct EvalError(pub String);

/// The expensive objective function.
pub trait Evaluator {
    fn evaluate(&mut self, candidate: &Candidate) -> Result<ObjectivePoint, EvalError>;

    /// Evaluates a batch; results must be in candidate order. Implementors
    /// may work concurrently.
    fn evaluate_batch(&mut self, candidates: &[Candidate]) -> alloc::vec::Vec<Result<ObjectivePoint, EvalError>> {
        candidates.iter().map(|c| self.evaluate(c)).collect()
    }
}

/// Adapts a closure into an [`Evaluator`].
pub struct FnEvaluator<F>(pub F);

impl<F> Evaluator for FnEvaluator<F>
where
    F: FnMut(&Candidate) -> Result<ObjectivePoint, EvalError>,
{
    fn evaluate(&mut self, candidate: &Candidate) -> Result<ObjectivePoint, EvalError> {
        (self.0)(candidate)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(&'static str),
    #[error("evaluation of candidate {index} failed: {source}")]
    Evaluation { index: usize, source: EvalError },
    #[error(transparent)]
    Evo(#[from] EvoError),
    #[error(transparent)]
    Surrogate(#[from] SurrogateError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// A failed run, with everything evaluated before the failure.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("search aborted: {cause}")]
pub struct RunError {
    pub cause: SearchError,
    pub archive: Box<GroundTruthArchive>,
    pub history: RunHistory,
}
