use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::SurrogateError;
use crate::evo::Candidate;
use crate::ObjectivePoint;

/// Index-aligned (candidate, objectives) pairs without duplicate candidates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    inputs: Vec<Candidate>,
    targets: Vec<ObjectivePoint>,
}

impl Dataset {
    pub fn new(inputs: Vec<Candidate>, targets: Vec<ObjectivePoint>) -> Result<Self, SurrogateError> {
        if inputs.len() != targets.len() {
            return Err(SurrogateError::LengthMismatch(inputs.len(), targets.len()));
        }
        let mut seen = BTreeSet::new();
        for (i, c) in inputs.iter().enumerate() {
            if !seen.insert(c.id()) {
                return Err(SurrogateError::DuplicateCandidate(i));
            }
        }
        if let Some(d) = inputs.first().map(Candidate::dim) {
            if let Some(bad) = inputs.iter().find(|c| c.dim() != d) {
                return Err(SurrogateError::DimensionMismatch {
                    expected: d,
                    got: bad.dim(),
                });
            }
        }
        Ok(Self { inputs, targets })
    }

    pub fn inputs(&self) -> &[Candidate] {
        &self.inputs
    }

    pub fn targets(&self) -> &[ObjectivePoint] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.inputs.first().map_or(0, Candidate::dim)
    }

    /// Rows at `idx`, in that order. Indices must be distinct.
    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            inputs: idx.iter().map(|&i| self.inputs[i].clone()).collect(),
            targets: idx.iter().map(|&i| self.targets[i]).collect(),
        }
    }
}
