use alloc::vec::Vec;

use super::MetricsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryRecord {
    /// Cumulative simulator evaluations at the end of the generation.
    pub evaluations: usize,
    pub hypervolume: f64,
}

/// One record per outer generation of a run (generation 0 is the warm
/// start).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunHistory {
    pub seed: u64,
    records: Vec<HistoryRecord>,
}

impl RunHistory {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, evaluations: usize, hypervolume: f64) -> Result<(), MetricsError> {
        if let Some(last) = self.records.last() {
            if evaluations <= last.evaluations {
                return Err(MetricsError::NonIncreasingEvaluations {
                    previous: last.evaluations,
                    next: evaluations,
                });
            }
        }
        self.records.push(HistoryRecord {
            evaluations,
            hypervolume,
        });
        Ok(())
    }

    pub fn records(&self) -> &[HistoryRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn best_hypervolume(&self) -> f64 {
        self.records.iter().map(|r| r.hypervolume).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityIndicators {
    /// Success rate in percent.
    pub sr: f64,
    /// Mean evaluations to first success over successful runs.
    pub aesr: Option<f64>,
    /// Mean generations to first success over successful runs.
    pub agsr: Option<f64>,
}

/// `(generation, evaluations)` of the first record whose hypervolume reaches
/// `target`.
pub fn first_success(history: &RunHistory, target: f64) -> Option<(usize, usize)> {
    history
        .records
        .iter()
        .enumerate()
        .find(|(_, r)| r.hypervolume >= target)
        .map(|(g, r)| (g, r.evaluations))
}

pub fn quality_indicators(
    histories: &[RunHistory],
    ref_hv: f64,
    threshold: f64,
) -> Result<QualityIndicators, MetricsError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(MetricsError::InvalidThreshold(threshold));
    }
    if !(ref_hv > 0.0) || !ref_hv.is_finite() {
        return Err(MetricsError::InvalidReferenceHv(ref_hv));
    }
    if histories.is_empty() || histories.iter().any(RunHistory::is_empty) {
        return Err(MetricsError::EmptyHistory);
    }
    let target = threshold * ref_hv;
    let hits: Vec<(usize, usize)> = histories.iter().filter_map(|h| first_success(h, target)).collect();
    let sr = 100.0 * hits.len() as f64 / histories.len() as f64;
    if hits.is_empty() {
        return Ok(QualityIndicators {
            sr,
            aesr: None,
            agsr: None,
        });
    }
    let n = hits.len() as f64;
    let agsr = hits.iter().map(|h| h.0 as f64).sum::<f64>() / n;
    let aesr = hits.iter().map(|h| h.1 as f64).sum::<f64>() / n;
    Ok(QualityIndicators {
        sr,
        aesr: Some(aesr),
        agsr: Some(agsr),
    })
}
