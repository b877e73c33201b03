use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::evo::{Candidate, CandidateId, Individual};
use crate::metrics::{hypervolume, FrontierSet, ObjectivePoint};
use crate::surrogate::{Dataset, SurrogateError};

/// Every simulator-evaluated candidate, in evaluation order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruthArchive {
    index: BTreeMap<CandidateId, usize>,
    log: Vec<(Candidate, ObjectivePoint)>,
}

impl GroundTruthArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log.is_empty()
    }

    pub fn get(&self, candidate: &Candidate) -> Option<ObjectivePoint> {
        self.index.get(&candidate.id()).map(|&i| self.log[i].1)
    }

    pub fn contains(&self, candidate: &Candidate) -> bool {
        self.index.contains_key(&candidate.id())
    }

    /// Adds an entry; returns false (and changes nothing) if the identity
    /// is already present.
    pub fn insert(&mut self, candidate: Candidate, objectives: ObjectivePoint) -> bool {
        let id = candidate.id();
        if self.index.contains_key(&id) {
            return false;
        }
        self.index.insert(id, self.log.len());
        self.log.push((candidate, objectives));
        true
    }

    /// Entries in insertion order.
    pub fn log(&self) -> &[(Candidate, ObjectivePoint)] {
        &self.log
    }

    pub fn points(&self) -> Vec<ObjectivePoint> {
        self.log.iter().map(|e| e.1).collect()
    }

    pub fn pareto(&self) -> FrontierSet {
        FrontierSet::pareto_of(&self.points())
    }

    pub fn hypervolume(&self, reference: &ObjectivePoint) -> f64 {
        hypervolume(&self.points(), reference)
    }

    pub fn dataset(&self) -> Result<Dataset, SurrogateError> {
        Dataset::new(self.log.iter().map(|e| e.0.clone()).collect(), self.points())
    }

    pub(crate) fn individual(&self, candidate: &Candidate) -> Option<Individual> {
        self.get(candidate).map(|o| Individual::evaluated(candidate.clone(), o))
    }
}
