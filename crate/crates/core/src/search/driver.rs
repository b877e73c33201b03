use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    acceptance_fill, look_ahead, EvalError, Evaluator, GroundTruthArchive, LookAheadParams, RunError, SearchConfig,
    SearchError,
};
use crate::evo::{Candidate, EAState, Individual};
use crate::metrics::{FrontierSet, RunHistory};
use crate::surrogate::{nd_score, SurrogateFamily};

/// Per-generation progress passed to the observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationReport {
    pub generation: usize,
    pub evaluations: usize,
    pub hypervolume: f64,
    /// `None` when no surrogate was trained this generation.
    pub nd_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub pareto: FrontierSet,
    pub archive: GroundTruthArchive,
    pub history: RunHistory,
}

/// Shared bookkeeping of both drivers.
struct Ledger<'a> {
    config: &'a SearchConfig,
    archive: GroundTruthArchive,
    history: RunHistory,
}

impl Ledger<'_> {
    fn fail(self, cause: SearchError) -> RunError {
        RunError {
            cause,
            archive: Box::new(self.archive),
            history: self.history,
        }
    }

    /// Evaluates the pretenders that are new to the archive (in order, up
    /// to the remaining budget) and returns every pretender with known
    /// objectives plus the number of new evaluations.
    fn evaluate<E: Evaluator + ?Sized>(
        &mut self,
        pretenders: &[Candidate],
        evaluator: &mut E,
    ) -> Result<(Vec<Individual>, usize), SearchError> {
        let remaining = self.config.budget - self.archive.len();
        let mut fresh = Vec::new();
        let mut queued = BTreeSet::new();
        for c in pretenders {
            if fresh.len() == remaining {
                break;
            }
            if !self.archive.contains(c) && queued.insert(c.id()) {
                fresh.push(c.clone());
            }
        }
        let results: Vec<Result<_, EvalError>> = evaluator.evaluate_batch(&fresh);
        for (index, (c, r)) in fresh.iter().zip(results).enumerate() {
            let p = r.map_err(|source| SearchError::Evaluation { index, source })?;
            self.archive.insert(c.clone(), p);
        }
        let mut seen = BTreeSet::new();
        let known = pretenders
            .iter()
            .filter(|c| seen.insert(c.id()))
            .filter_map(|c| self.archive.individual(c))
            .collect();
        Ok((known, fresh.len()))
    }

    fn record(&mut self) -> Result<f64, SearchError> {
        let hv = self.archive.hypervolume(&self.config.hv_reference);
        self.history.push(self.archive.len(), hv)?;
        Ok(hv)
    }
}

fn check_engine(config: &SearchConfig, ea: &EAState) -> Result<(), SearchError> {
    config.validate()?;
    let ec = ea.config();
    if ec.population_size != config.population || ec.offspring_size != config.offspring {
        return Err(SearchError::Config("engine population/offspring differ from the search config"));
    }
    if !ea.population().is_empty() {
        return Err(SearchError::Config("engine must start with an empty population"));
    }
    Ok(())
}

/// Runs the surrogate-assisted search.
///
/// Each generation evaluates the pending pretenders (cached candidates are
/// free), records the archive hypervolume, refits the surrogate on the whole
/// archive when a surrogate-driven option is on, advances the engine, then
/// proposes the next pretenders:
///
/// * look-ahead on: reservoir-sampled look-ahead pretenders (new to the
///   archive, at most `offspring`), the rest filled by acceptance sampling
///   or plain infill;
/// * acceptance only: `offspring` candidates from acceptance sampling;
/// * neither: plain infill, which reproduces the bare engine.
///
/// The run ends when the budget is spent or a generation yields no new
/// evaluation.
pub fn run<F, E>(
    config: &SearchConfig,
    mut ea: EAState,
    evaluator: &mut E,
    family: &F,
    observer: &mut dyn FnMut(&GenerationReport),
) -> Result<SearchOutcome, RunError>
where
    F: SurrogateFamily,
    E: Evaluator + ?Sized,
{
    let mut ledger = Ledger {
        config,
        archive: GroundTruthArchive::new(),
        history: RunHistory::new(config.seed),
    };
    if let Err(e) = check_engine(config, &ea) {
        return Err(ledger.fail(e));
    }
    let mut aux = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5EED_A11C_E5A3_17E5);
    let params = LookAheadParams {
        batch: config.offspring,
        tolerance: config.look_ahead_tolerance,
        window: config.look_ahead_window,
        max_generations: config.look_ahead_max_generations,
    };
    let mut step = |ledger: &mut Ledger, ea: &mut EAState, pretenders: Vec<Candidate>, generation: usize| {
        let (known, fresh) = ledger.evaluate(&pretenders, evaluator)?;
        if generation > 0 && fresh == 0 {
            return Ok(None);
        }
        let hypervolume = ledger.record()?;
        let mut report = GenerationReport {
            generation,
            evaluations: ledger.archive.len(),
            hypervolume,
            nd_score: None,
        };
        if ledger.archive.len() >= config.budget {
            observer(&report);
            return Ok(None);
        }
        let surrogate = if config.acceptance || config.look_ahead {
            let data = ledger.archive.dataset()?;
            let model = family.fit(&data, aux.random())?;
            let score = nd_score(family, &data, config.k_folds, &mut aux)?;
            report.nd_score = Some(score);
            Some((model, score))
        } else {
            None
        };
        observer(&report);
        ea.advance(known)?;
        let next = match &surrogate {
            None => ea.infill(config.offspring)?,
            Some((model, score)) if config.look_ahead => {
                let mut seen = BTreeSet::new();
                let mut picked: Vec<Candidate> = look_ahead(model, &ledger.archive, ea, *score, &params, &mut aux)?
                    .into_iter()
                    .filter(|c| !ledger.archive.contains(c) && seen.insert(c.id()))
                    .take(config.offspring)
                    .collect();
                let slots = config.offspring - picked.len();
                if slots > 0 {
                    let fill = if config.acceptance {
                        acceptance_fill(ea, model, &ledger.archive, slots, *score, config.acceptance_draw_cap_factor, &mut aux)?
                    } else {
                        ea.infill(slots)?
                    };
                    picked.extend(fill);
                }
                picked
            }
            Some((model, score)) => acceptance_fill(
                ea,
                model,
                &ledger.archive,
                config.offspring,
                *score,
                config.acceptance_draw_cap_factor,
                &mut aux,
            )?,
        };
        Ok(Some(next))
    };
    let mut pretenders = match ea.infill(config.population) {
        Ok(p) => p,
        Err(e) => return Err(ledger.fail(e.into())),
    };
    let mut generation = 0;
    loop {
        match step(&mut ledger, &mut ea, pretenders, generation) {
            Ok(Some(next)) => pretenders = next,
            Ok(None) => break,
            Err(e) => return Err(ledger.fail(e)),
        }
        generation += 1;
    }
    Ok(SearchOutcome {
        pareto: ledger.archive.pareto(),
        archive: ledger.archive,
        history: ledger.history,
    })
}

/// The engine on its own: warm start, then `offspring` new candidates per
/// generation until the budget is spent.
pub fn run_bare_ea<E>(config: &SearchConfig, mut ea: EAState, evaluator: &mut E) -> Result<SearchOutcome, RunError>
where
    E: Evaluator + ?Sized,
{
    let mut ledger = Ledger {
        config,
        archive: GroundTruthArchive::new(),
        history: RunHistory::new(config.seed),
    };
    let result = (|| -> Result<(), SearchError> {
        check_engine(config, &ea)?;
        let mut pretenders = ea.infill(config.population)?;
        let mut generation = 0;
        loop {
            let (known, fresh) = ledger.evaluate(&pretenders, evaluator)?;
            if generation > 0 && fresh == 0 {
                return Ok(());
            }
            ledger.record()?;
            if ledger.archive.len() >= config.budget {
                return Ok(());
            }
            ea.advance(known)?;
            pretenders = ea.infill(config.offspring)?;
            generation += 1;
        }
    })();
    match result {
        Ok(()) => Ok(SearchOutcome {
            pareto: ledger.archive.pareto(),
            archive: ledger.archive,
            history: ledger.history,
        }),
        Err(e) => Err(ledger.fail(e)),
    }
}
