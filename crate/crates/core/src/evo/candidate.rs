use num_traits::Float;
use alloc::vec::Vec;

use super::EvoError;
use crate::ObjectivePoint;

/// Quantization step used for candidate identity.
pub const GENE_QUANTUM: f64 = 1e-12;

/// A point of the normalized search space: `d` genes, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    genes: Vec<f64>,
}

/// Identity of a candidate: its genes quantized to [`GENE_QUANTUM`].
/// Two candidates with the same identity are the same simulator input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(Vec<i64>);

impl CandidateId {
    /// FNV-1a over the quantized genes; stable across platforms and runs.
    pub fn stable_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for q in &self.0 {
            for b in q.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }
}

impl Candidate {
    pub fn new(genes: Vec<f64>) -> Result<Self, EvoError> {
        if let Some((index, &value)) = genes
            .iter()
            .enumerate()
            .find(|(_, g)| !(**g >= 0.0 && **g <= 1.0))
        {
            return Err(EvoError::GeneOutOfRange { index, value });
        }
        Ok(Self { genes })
    }

    /// Clamps each gene into `[0, 1]` (NaN maps to 0).
    pub fn clamped(mut genes: Vec<f64>) -> Self {
        for g in &mut genes {
            *g = if g.is_nan() { 0.0 } else { g.clamp(0.0, 1.0) };
        }
        Self { genes }
    }

    pub fn genes(&self) -> &[f64] {
        &self.genes
    }

    pub fn dim(&self) -> usize {
        self.genes.len()
    }

    pub fn id(&self) -> CandidateId {
        CandidateId(
            self.genes
                .iter()
                .map(|g| (g / GENE_QUANTUM).round() as i64)
                .collect(),
        )
    }
}

/// Population member. `rank`/`crowding` are filled in by survival.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub candidate: Candidate,
    pub objectives: Option<ObjectivePoint>,
    pub rank: Option<usize>,
    pub crowding: Option<f64>,
}

impl Individual {
    pub fn evaluated(candidate: Candidate, objectives: ObjectivePoint) -> Self {
        Self {
            candidate,
            objectives: Some(objectives),
            rank: None,
            crowding: None,
        }
    }
}
