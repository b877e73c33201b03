//! Backtest-backed objective function.

use std::collections::BTreeSet;

use parden_core::backtest::{DecodeBoxes, HyperParamsDecoded, PreparedMarket};
use parden_core::evo::{Candidate, CandidateId};
use parden_core::portfolio::{ConstraintSet, CostParams};
use parden_core::search::{EvalError, Evaluator};
use parden_core::ObjectivePoint;

/// Decodes genes into trade-off parameters and backtests them on a
/// prepared market. Counts every simulator call and every repeated
/// candidate.
pub struct BacktestEvaluator<'a> {
    market: &'a PreparedMarket,
    boxes: DecodeBoxes,
    costs: CostParams,
    constraints: ConstraintSet,
    seen: BTreeSet<CandidateId>,
    calls: usize,
    repeats: usize,
}

impl<'a> BacktestEvaluator<'a> {
    pub fn new(market: &'a PreparedMarket, boxes: DecodeBoxes, costs: CostParams, constraints: ConstraintSet) -> Self {
        Self {
            market,
            boxes,
            costs,
            constraints,
            seen: BTreeSet::new(),
            calls: 0,
            repeats: 0,
        }
    }

    pub fn calls(&self) -> usize {
        self.calls
    }

    /// Calls on a candidate that had already been simulated.
    pub fn repeated_calls(&self) -> usize {
        self.repeats
    }
}

impl Evaluator for BacktestEvaluator<'_> {
    fn evaluate(&mut self, candidate: &Candidate) -> Result<ObjectivePoint, EvalError> {
        self.calls += 1;
        if !self.seen.insert(candidate.id()) {
            self.repeats += 1;
        }
        let hp = HyperParamsDecoded::decode(candidate.genes(), &self.boxes).map_err(|e| EvalError(e.to_string()))?;
        self.market
            .run(&hp, &self.costs, &self.constraints)
            .map(|r| r.objectives)
            .map_err(|e| EvalError(e.to_string()))
    }
}
