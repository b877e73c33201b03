use alloc::vec::Vec;
use num_traits::Float;
use rand::Rng;

use super::{moo_space_termination, GroundTruthArchive, Reservoir, SearchError};
use crate::evo::{Candidate, EAState, Individual};
use crate::metrics::{dominates_min, pareto_indices, FrontierSet, ObjectivePoint};
use crate::surrogate::Surrogate;

/// Knobs of the look-ahead loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LookAheadParams {
    /// Candidates generated per look-ahead generation.
    pub batch: usize,
    pub tolerance: f64,
    pub window: usize,
    pub max_generations: usize,
}

/// `max(1, round(batch * nd_score))`
pub fn reservoir_capacity(batch: usize, nd_score: f64) -> usize {
    ((batch as f64 * nd_score).round() as usize).max(1)
}

/// Iterates a throw-away copy of `ea` on surrogate predictions and samples
/// the candidates that were predicted non-dominated into a reservoir.
///
/// The running comparison set starts as the archive's Pareto front and
/// absorbs every predicted non-dominated candidate. The loop stops when the
/// copy's predicted front settles or after `max_generations`.
pub fn look_ahead<S, R>(
    model: &S,
    archive: &GroundTruthArchive,
    ea: &EAState,
    nd_score: f64,
    params: &LookAheadParams,
    rng: &mut R,
) -> Result<Vec<Candidate>, SearchError>
where
    S: Surrogate + ?Sized,
    R: Rng + ?Sized,
{
    let mut reservoir = Reservoir::new(reservoir_capacity(params.batch, nd_score), rng.random());
    let mut copy = ea.clone();
    copy.reseed(rng.random());
    let mut front: Vec<[f64; 2]> = archive.pareto().iter().map(ObjectivePoint::to_minimization).collect();
    let mut fronts: Vec<FrontierSet> = Vec::new();
    for generation in 1..=params.max_generations {
        let xs = copy.infill(params.batch)?;
        let predicted = model.predict(&xs)?;
        copy.advance(
            xs.iter()
                .zip(&predicted)
                .map(|(c, p)| Individual::evaluated(c.clone(), *p))
                .collect(),
        )?;
        let n_old = front.len();
        let mut pool = front;
        pool.extend(predicted.iter().map(ObjectivePoint::to_minimization));
        let keep = pareto_indices(&pool);
        for &i in keep.iter().filter(|&&i| i >= n_old) {
            reservoir.update(xs[i - n_old].clone());
        }
        front = keep.iter().map(|&i| pool[i]).collect();
        fronts.push(population_front(&copy));
        if generation >= params.window && moo_space_termination(&fronts, params.tolerance, params.window)? {
            break;
        }
    }
    Ok(reservoir.into_items())
}

fn population_front(ea: &EAState) -> FrontierSet {
    let pts: Vec<ObjectivePoint> = ea.population().iter().filter_map(|i| i.objectives).collect();
    FrontierSet::pareto_of(&pts)
}

/// Draws `slots` candidates from the live engine, screening each with the
/// surrogate: predicted non-dominated (against the archive and everything
/// accepted so far) is accepted, predicted dominated is accepted with
/// probability `1 - nd_score`. After `cap_factor * slots` draws the
/// remaining slots are filled from plain infill.
pub fn acceptance_fill<S, R>(
    ea: &mut EAState,
    model: &S,
    archive: &GroundTruthArchive,
    slots: usize,
    nd_score: f64,
    cap_factor: usize,
    rng: &mut R,
) -> Result<Vec<Candidate>, SearchError>
where
    S: Surrogate + ?Sized,
    R: Rng + ?Sized,
{
    let mut accepted = Vec::with_capacity(slots);
    if slots == 0 {
        return Ok(accepted);
    }
    let mut reference: Vec<[f64; 2]> = archive.pareto().iter().map(ObjectivePoint::to_minimization).collect();
    let cap = cap_factor * slots;
    let mut draws = 0;
    let keep_dominated = 1.0 - nd_score;
    while accepted.len() < slots && draws < cap {
        let want = (slots - accepted.len()).min(cap - draws);
        for c in ea.infill(want)? {
            draws += 1;
            let p = model.predict_one(c.genes())?.to_minimization();
            let dominated = reference.iter().any(|r| dominates_min(r, &p));
            if !dominated || rng.random::<f64>() < keep_dominated {
                reference.push(p);
                accepted.push(c);
            }
        }
    }
    if accepted.len() < slots {
        accepted.extend(ea.infill(slots - accepted.len())?);
    }
    Ok(accepted)
}
