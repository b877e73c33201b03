use std::collections::BTreeSet;

use parden_core::evo::{Candidate, EAConfig, EAState};
use parden_core::metrics::dominates;
use parden_core::search::{
    look_ahead, run, run_bare_ea, EvalError, Evaluator, GenerationReport, LookAheadParams, SearchConfig,
    SearchError, SearchOutcome,
};
use parden_core::surrogate::{BaggedTrees, SurrogateFamily};
use parden_core::ObjectivePoint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn toy(g: &[f64]) -> ObjectivePoint {
    let risk = 5.0 + 30.0 * g[0] + 2.0 * g[2];
    let ret = 20.0 * g[0].sqrt() * (1.0 - 0.5 * g[1]) + 3.0 * g[2] - 2.0 * g[2] * g[2];
    ObjectivePoint::new(risk, ret).unwrap()
}

/// Toy objective that records every call.
#[derive(Default)]
struct Counting {
    calls: usize,
    seen: BTreeSet<Vec<u64>>,
    repeats: usize,
}

impl Evaluator for Counting {
    fn evaluate(&mut self, c: &Candidate) -> Result<ObjectivePoint, EvalError> {
        self.calls += 1;
        if !self.seen.insert(c.genes().iter().map(|x| x.to_bits()).collect()) {
            self.repeats += 1;
        }
        Ok(toy(c.genes()))
    }
}

fn config(budget: usize, acceptance: bool, look_ahead: bool, seed: u64) -> SearchConfig {
    SearchConfig {
        budget,
        acceptance,
        look_ahead,
        seed,
        ..SearchConfig::default()
    }
}

fn engine(seed: u64) -> EAState {
    EAState::new(EAConfig::nsga2(3), seed).unwrap()
}

fn search(cfg: &SearchConfig, ev: &mut Counting) -> SearchOutcome {
    run(cfg, engine(cfg.seed), ev, &BaggedTrees::default(), &mut |_| {}).unwrap()
}

const MODES: [(bool, bool); 4] = [(false, false), (true, false), (false, true), (true, true)];

#[test]
fn warm_start_only_budget() {
    for (a, l) in MODES {
        let out = search(&config(60, a, l, 1), &mut Counting::default());
        assert_eq!(out.archive.len(), 60);
        assert_eq!(out.history.len(), 1);
        assert_eq!(out.history.records()[0].evaluations, 60);
    }
}

#[test]
fn plain_mode_replays_the_bare_engine() {
    for seed in 0..3 {
        let cfg = config(300, false, false, seed);
        let plain = search(&cfg, &mut Counting::default());
        let bare = run_bare_ea(&cfg, engine(seed), &mut Counting::default()).unwrap();
        assert_eq!(plain.archive.log(), bare.archive.log());
        assert_eq!(plain.history, bare.history);
    }
}

#[test]
fn budget_respected_and_no_candidate_simulated_twice() {
    for (a, l) in MODES {
        for budget in [97, 150] {
            let mut ev = Counting::default();
            let out = search(&config(budget, a, l, 4), &mut ev);
            assert!(ev.calls <= budget);
            assert_eq!(ev.calls, out.archive.len());
            assert_eq!(ev.repeats, 0);
            let evals: Vec<usize> = out.history.records().iter().map(|r| r.evaluations).collect();
            assert!(evals.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn reported_front_is_the_archive_front() {
    for (a, l) in MODES {
        let out = search(&config(150, a, l, 2), &mut Counting::default());
        let pts = out.archive.points();
        let mut brute: Vec<ObjectivePoint> = pts
            .iter()
            .copied()
            .filter(|p| !pts.iter().any(|q| dominates(q, p)))
            .collect();
        brute.sort_by(|x, y| x.risk_pct().total_cmp(&y.risk_pct()));
        brute.dedup();
        assert_eq!(out.pareto.points, brute);
    }
}

#[test]
fn runs_are_reproducible_and_observed() {
    let cfg = config(180, true, true, 9);
    let mut seen: Vec<GenerationReport> = Vec::new();
    let a = run(&cfg, engine(9), &mut Counting::default(), &BaggedTrees::default(), &mut |r| seen.push(*r)).unwrap();
    let b = search(&cfg, &mut Counting::default());
    assert_eq!(a, b);
    assert_eq!(seen.len(), a.history.len());
    for (r, h) in seen.iter().zip(a.history.records()) {
        assert_eq!((r.evaluations, r.hypervolume), (h.evaluations, h.hypervolume));
    }
    // no surrogate is trained once the budget is spent
    let (last, rest) = seen.split_last().unwrap();
    assert!(last.nd_score.is_none());
    assert!(rest.iter().all(|r| r.nd_score.is_some_and(|s| (0.0..=1.0).contains(&s))));
}

#[test]
fn look_ahead_works_on_a_copy() {
    let cfg = config(90, false, false, 5);
    let out = search(&cfg, &mut Counting::default());
    let mut ea = engine(5);
    let warm = ea.infill(60).unwrap();
    let evaluated = warm
        .into_iter()
        .map(|c| {
            let p = out.archive.get(&c).unwrap();
            parden_core::evo::Individual::evaluated(c, p)
        })
        .collect();
    ea.advance(evaluated).unwrap();
    let before = ea.clone();
    let model = BaggedTrees::default().fit(&out.archive.dataset().unwrap(), 1).unwrap();
    let params = LookAheadParams {
        batch: 30,
        tolerance: 1e-4,
        window: 5,
        max_generations: 20,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let picks = look_ahead(&model, &out.archive, &ea, 0.5, &params, &mut rng).unwrap();
    assert!(!picks.is_empty() && picks.len() <= 15);
    assert!(picks.iter().all(|c| !out.archive.contains(c)));
    let ids: BTreeSet<_> = picks.iter().map(Candidate::id).collect();
    assert_eq!(ids.len(), picks.len());
    // the live engine is untouched: it still proposes what its snapshot does
    let mut snapshot = before;
    assert_eq!(ea.infill(30).unwrap(), snapshot.infill(30).unwrap());
}

#[test]
fn failing_evaluator_returns_partial_archive() {
    let mut n = 0;
    let mut ev = parden_core::search::FnEvaluator(|c: &Candidate| {
        n += 1;
        if n > 70 {
            Err(EvalError("simulator crashed".into()))
        } else {
            Ok(toy(c.genes()))
        }
    });
    let err = run(&config(150, true, false, 0), engine(0), &mut ev, &BaggedTrees::default(), &mut |_| {}).unwrap_err();
    assert!(matches!(err.cause, SearchError::Evaluation { .. }));
    assert_eq!(err.archive.len(), 70);
    assert_eq!(err.history.len(), 1);
}
