//! Model-free baselines: Latin-hypercube random search and a log-spaced
//! grid.

use parden_core::evo::{lhs_init, Candidate};
use parden_core::search::{Evaluator, GroundTruthArchive, RunError, SearchConfig, SearchError, SearchOutcome};
use parden_core::RunHistory;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Number of genes of the trade-off search space.
pub const DIMENSION: usize = 3;

/// Evaluates `count` LHS-sampled candidates in order. On failure the
/// error carries everything evaluated so far.
pub fn random_search<E, R>(count: usize, evaluator: &mut E, rng: &mut R) -> Result<GroundTruthArchive, RunError>
where
    E: Evaluator + ?Sized,
    R: rand::Rng + ?Sized,
{
    let config = SearchConfig {
        budget: count,
        population: count,
        offspring: count,
        ..SearchConfig::default()
    };
    sequence_run(&config, lhs_init(count, DIMENSION, rng), evaluator).map(|o| o.archive)
}

/// Random search as a search method: `budget` LHS samples drawn from
/// `config.seed`.
pub fn random_search_run<E>(config: &SearchConfig, evaluator: &mut E) -> Result<SearchOutcome, RunError>
where
    E: Evaluator + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    sequence_run(config, lhs_init(config.budget, DIMENSION, &mut rng), evaluator)
}

/// `shape[0] x shape[1] x shape[2]` lattice on the unit cube (decoded
/// log-uniformly, so evenly log-spaced in the parameters), in lexicographic
/// order and truncated to `total` points. With the default boxes the tail
/// holds the largest trade-off parameters, so `([8, 8, 8], 510)` drops the
/// two corners `(1, 1, 1)` and `(1, 1, 6/7)`.
pub fn grid_lattice(shape: [usize; 3], total: usize) -> Vec<Candidate> {
    let axis = |n: usize, k: usize| if n <= 1 { 0.5 } else { k as f64 / (n - 1) as f64 };
    let mut out = Vec::with_capacity(shape.iter().product());
    for i in 0..shape[0] {
        for j in 0..shape[1] {
            for k in 0..shape[2] {
                let genes = vec![axis(shape[0], i), axis(shape[1], j), axis(shape[2], k)];
                out.push(Candidate::new(genes).expect("lattice inside the unit cube"));
            }
        }
    }
    out.truncate(total);
    out
}

/// Grid search as a search method: the `8x8x8` lattice cut to the budget,
/// visited in an order shuffled by `config.seed` so that its progress
/// history is comparable with the other methods.
pub fn grid_search<E>(config: &SearchConfig, evaluator: &mut E) -> Result<SearchOutcome, RunError>
where
    E: Evaluator + ?Sized,
{
    let mut lattice = grid_lattice([8, 8, 8], config.budget.min(510));
    lattice.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed));
    sequence_run(config, lattice, evaluator)
}

/// Evaluates a fixed candidate sequence (skipping repeats, stopping at the
/// budget) with history checkpoints after `population` evaluations and
/// every `offspring` thereafter, plus a final one.
pub fn sequence_run<E>(config: &SearchConfig, candidates: Vec<Candidate>, evaluator: &mut E) -> Result<SearchOutcome, RunError>
where
    E: Evaluator + ?Sized,
{
    let mut archive = GroundTruthArchive::new();
    let mut history = RunHistory::new(config.seed);
    let fail = |cause: SearchError, archive: GroundTruthArchive, history: RunHistory| RunError {
        cause,
        archive: Box::new(archive),
        history,
    };
    let mut next = config.population;
    for (index, c) in candidates.into_iter().enumerate() {
        if archive.len() == config.budget {
            break;
        }
        if archive.contains(&c) {
            continue;
        }
        match evaluator.evaluate(&c) {
            Ok(p) => {
                archive.insert(c, p);
            }
            Err(source) => return Err(fail(SearchError::Evaluation { index, source }, archive, history)),
        }
        if archive.len() == next {
            if let Err(e) = history.push(archive.len(), archive.hypervolume(&config.hv_reference)) {
                return Err(fail(e.into(), archive, history));
            }
            next += config.offspring.max(1);
        }
    }
    let last = history.records().last().map_or(0, |r| r.evaluations);
    if last != archive.len() && !archive.is_empty() {
        if let Err(e) = history.push(archive.len(), archive.hypervolume(&config.hv_reference)) {
            return Err(fail(e.into(), archive, history));
        }
    }
    Ok(SearchOutcome {
        pareto: archive.pareto(),
        archive,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use parden_core::search::{EvalError, FnEvaluator};
    use parden_core::ObjectivePoint;

    fn toy(c: &Candidate) -> Result<ObjectivePoint, EvalError> {
        let g = c.genes();
        Ok(ObjectivePoint::new(10.0 * g[0] + g[2], 10.0 * g[0] * g[0] - g[1]).unwrap())
    }

    #[test]
    fn lattice_shape() {
        let l = grid_lattice([8, 8, 8], 510);
        assert_eq!(l.len(), 510);
        assert_eq!(l[0].genes(), &[0.0, 0.0, 0.0]);
        assert_eq!(l[509].genes(), &[1.0, 1.0, 5.0 / 7.0]);
        let mut ids: Vec<_> = l.iter().map(Candidate::id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 510);
    }

    #[test]
    fn random_search_honors_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_search(37, &mut FnEvaluator(toy), &mut rng).unwrap();
        assert_eq!(a.len(), 37);
    }

    #[test]
    fn checkpoints_follow_generations() {
        let cfg = SearchConfig {
            budget: 130,
            ..SearchConfig::default()
        };
        let out = random_search_run(&cfg, &mut FnEvaluator(toy)).unwrap();
        let evals: Vec<usize> = out.history.records().iter().map(|r| r.evaluations).collect();
        assert_eq!(evals, vec![60, 90, 120, 130]);
        let out = grid_search(&cfg, &mut FnEvaluator(toy)).unwrap();
        assert_eq!(out.archive.len(), 130);
    }

    #[test]
    fn failure_keeps_partial_archive() {
        let mut n = 0;
        let mut ev = FnEvaluator(|c: &Candidate| {
            n += 1;
            if n == 5 {
                Err(EvalError("boom".into()))
            } else {
                toy(c)
            }
        });
        let err = random_search(10, &mut ev, &mut ChaCha8Rng::seed_from_u64(0)).unwrap_err();
        assert_eq!(err.archive.len(), 4);
    }
}
