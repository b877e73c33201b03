//! Repeated seeded runs per method, indicators against a random-search
//! reference frontier, and the statistics over them.

use std::path::{Path, PathBuf};

use parden_core::backtest::{BacktestError, PreparedMarket};
use parden_core::evo::{EAConfig, EAState};
use parden_core::metrics::{first_success, gd_plus, hypervolume, igd_plus, quality_indicators, MetricsError};
use parden_core::search::{run, run_bare_ea, GroundTruthArchive, RunError, SearchOutcome};
use parden_core::stats::StatsError;
use parden_core::surrogate::BaggedTrees;
use parden_core::{FrontierSet, RunHistory};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::baselines::{grid_search, random_search, random_search_run, DIMENSION};
use crate::evaluator::BacktestEvaluator;
use crate::files::{rounded_frontier, save_frontier, save_history, write_json, FileError};
use crate::report::{write_indicators, StatsReport};
use crate::spec::{ExperimentSpec, Method, SpecError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Backtest(#[from] BacktestError),
    #[error("reference search failed: {0}")]
    Reference(Box<RunError>),
    #[error("{method} seed {seed}: {calls} simulator calls for a budget of {budget}")]
    BudgetExceeded {
        method: Method,
        seed: u64,
        calls: usize,
        budget: usize,
    },
    #[error("{method} seed {seed}: {repeats} candidates simulated twice")]
    RepeatedCandidate { method: Method, seed: u64, repeats: usize },
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    Failed,
}

impl RunStatus {
    pub fn name(self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::Failed => "failed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(RunStatus::Ok),
            "failed" => Some(RunStatus::Failed),
            _ => None,
        }
    }
}

/// One finished (or aborted) run.
#[derive(Debug, Clone)]
pub struct MethodRun {
    pub method: Method,
    pub seed: u64,
    /// Partial when `error` is set.
    pub outcome: SearchOutcome,
    pub error: Option<String>,
    pub calls: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorRow {
    pub method: Method,
    pub seed: u64,
    pub status: RunStatus,
    pub evaluations: usize,
    /// Of the saved (6-decimal) frontier.
    pub hypervolume: f64,
    pub best_hypervolume: f64,
    pub gd_plus: f64,
    pub igd_plus: f64,
    /// Evaluations at the first generation reaching the threshold;
    /// `budget + 1` for runs that never do.
    pub aesr: f64,
    pub agsr: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualityRow {
    pub method: Method,
    pub runs_ok: usize,
    pub runs_failed: usize,
    pub sr: f64,
    pub aesr: Option<f64>,
    pub agsr: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    /// Rounded as saved.
    pub reference: FrontierSet,
    pub reference_hv: f64,
    pub dropped_assets: Vec<String>,
    pub runs: Vec<MethodRun>,
    pub rows: Vec<IndicatorRow>,
    pub quality: Vec<QualityRow>,
    pub stats: StatsReport,
}

fn evaluator<'a>(spec: &ExperimentSpec, market: &'a PreparedMarket) -> BacktestEvaluator<'a> {
    BacktestEvaluator::new(
        market,
        spec.backtest.boxes(),
        spec.backtest.costs(),
        spec.backtest.constraints(),
    )
}

fn ea_config(survival_of: fn(usize) -> EAConfig, spec: &ExperimentSpec) -> EAConfig {
    EAConfig {
        population_size: spec.search.population,
        offspring_size: spec.search.offspring,
        ..survival_of(DIMENSION)
    }
}

/// One seeded run of `method`. Evaluator failures give a run with
/// `error` set; budget or duplicate violations are hard errors.
pub fn run_method(
    method: Method,
    spec: &ExperimentSpec,
    market: &PreparedMarket,
    seed: u64,
) -> Result<MethodRun, ExperimentError> {
    let config = spec.search.to_config(method, seed)?;
    let mut ev = evaluator(spec, market);
    let engine = |f: fn(usize) -> EAConfig| {
        EAState::new(ea_config(f, spec), seed).map_err(|e| SpecError::Invalid(e.to_string()))
    };
    let result = match method {
        Method::Nsga2 => run_bare_ea(&config, engine(EAConfig::nsga2)?, &mut ev),
        Method::Rnsga2 => run_bare_ea(&config, engine(EAConfig::rnsga2)?, &mut ev),
        Method::RandomSearch => random_search_run(&config, &mut ev),
        Method::GridSearch => grid_search(&config, &mut ev),
        _ => run(
            &config,
            engine(EAConfig::nsga2)?,
            &mut ev,
            &BaggedTrees::default(),
            &mut |_| {},
        ),
    };
    let (outcome, error) = match result {
        Ok(o) => (o, None),
        Err(e) => {
            let archive: GroundTruthArchive = *e.archive;
            (
                SearchOutcome {
                    pareto: archive.pareto(),
                    archive,
                    history: e.history,
                },
                Some(e.cause.to_string()),
            )
        }
    };
    if ev.calls() > config.budget {
        return Err(ExperimentError::BudgetExceeded {
            method,
            seed,
            calls: ev.calls(),
            budget: config.budget,
        });
    }
    if ev.repeated_calls() > 0 {
        return Err(ExperimentError::RepeatedCandidate {
            method,
            seed,
            repeats: ev.repeated_calls(),
        });
    }
    Ok(MethodRun {
        method,
        seed,
        outcome,
        error,
        calls: ev.calls(),
    })
}

/// Random-search reference archive for the spec.
pub fn reference_archive(spec: &ExperimentSpec, market: &PreparedMarket) -> Result<GroundTruthArchive, ExperimentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.reference.seed);
    random_search(spec.reference.evaluations, &mut evaluator(spec, market), &mut rng)
        .map_err(|e| ExperimentError::Reference(Box::new(e)))
}

/// Indicators of one run against the (rounded) reference frontier.
pub fn indicator_row(
    run: &MethodRun,
    reference: &FrontierSet,
    reference_hv: f64,
    spec: &ExperimentSpec,
) -> Result<IndicatorRow, ExperimentError> {
    let hv_ref = spec.search.hv_reference()?;
    let front = rounded_frontier(&run.outcome.pareto);
    let (gd, igd) = if front.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        (gd_plus(&front.points, &reference.points)?, igd_plus(&front.points, &reference.points)?)
    };
    let hit = first_success(&run.outcome.history, spec.threshold * reference_hv);
    let failed = run.error.is_some() || front.is_empty();
    Ok(IndicatorRow {
        method: run.method,
        seed: run.seed,
        status: if failed { RunStatus::Failed } else { RunStatus::Ok },
        evaluations: run.outcome.archive.len(),
        hypervolume: hypervolume(&front.points, &hv_ref),
        best_hypervolume: run.outcome.history.best_hypervolume(),
        gd_plus: gd,
        igd_plus: igd,
        aesr: hit.map_or((spec.search.budget + 1) as f64, |h| h.1 as f64),
        agsr: hit.map(|h| h.0),
    })
}

fn quality_rows(spec: &ExperimentSpec, runs: &[MethodRun], rows: &[IndicatorRow], reference_hv: f64) -> Result<Vec<QualityRow>, ExperimentError> {
    let mut out = Vec::new();
    for &m in &spec.methods {
        let ok: Vec<RunHistory> = runs
            .iter()
            .zip(rows)
            .filter(|(r, row)| r.method == m && row.status == RunStatus::Ok)
            .map(|(r, _)| r.outcome.history.clone())
            .collect();
        let total = runs.iter().filter(|r| r.method == m).count();
        let q = if ok.is_empty() {
            None
        } else {
            Some(quality_indicators(&ok, reference_hv, spec.threshold)?)
        };
        out.push(QualityRow {
            method: m,
            runs_ok: ok.len(),
            runs_failed: total - ok.len(),
            sr: q.map_or(0.0, |q| q.sr),
            aesr: q.and_then(|q| q.aesr),
            agsr: q.and_then(|q| q.agsr),
        });
    }
    Ok(out)
}

/// Runs every method `repeats` times and, when an output directory is given
/// (argument first, then the spec's), writes all artifacts there.
pub fn run_experiment(
    spec: &ExperimentSpec,
    out: Option<&Path>,
    progress: &mut dyn FnMut(&str),
) -> Result<ExperimentOutput, ExperimentError> {
    spec.validate()?;
    let (data, dropped_assets) = spec.data.load()?;
    for id in &dropped_assets {
        progress(&format!("warning: dropped asset {id} with missing days"));
    }
    let market = PreparedMarket::new(&data, &spec.backtest.config(), spec.backtest.evaluation_seed)?;
    progress(&format!(
        "reference: {} random-search evaluations",
        spec.reference.evaluations
    ));
    let hv_ref = spec.search.hv_reference()?;
    let reference = rounded_frontier(&reference_archive(spec, &market)?.pareto());
    let reference_hv = hypervolume(&reference.points, &hv_ref);
    let mut runs = Vec::new();
    let mut rows = Vec::new();
    for &method in &spec.methods {
        for seed in spec.seeds() {
            let r = run_method(method, spec, &market, seed)?;
            let row = indicator_row(&r, &reference, reference_hv, spec)?;
            progress(&format!(
                "{method} seed {seed}: {} evaluations, hv {:.3}, aesr {}{}",
                row.evaluations,
                row.hypervolume,
                row.aesr,
                r.error.as_deref().map_or(String::new(), |e| format!(", failed: {e}"))
            ));
            runs.push(r);
            rows.push(row);
        }
    }
    let quality = quality_rows(spec, &runs, &rows, reference_hv)?;
    let stats = StatsReport::build(&rows, &spec.methods, &spec.tested)?;
    let output = ExperimentOutput {
        reference,
        reference_hv,
        dropped_assets,
        runs,
        rows,
        quality,
        stats,
    };
    if let Some(dir) = out.map(Path::to_path_buf).or_else(|| spec.out.clone()) {
        write_outputs(&dir, spec, &output)?;
    }
    Ok(output)
}

pub fn run_dir(out: &Path, method: Method, seed: u64) -> PathBuf {
    out.join("runs").join(method.name()).join(format!("seed_{seed}"))
}

#[derive(Serialize)]
struct Cell<'a> {
    #[serde(flatten)]
    quality: &'a QualityRow,
    incomplete: bool,
    median_hypervolume: Option<f64>,
}

#[derive(Serialize)]
struct Summary<'a> {
    version: String,
    base_seed: u64,
    seeds: Vec<u64>,
    reference_hypervolume: f64,
    reference_points: usize,
    dropped_assets: &'a [String],
    cells: Vec<Cell<'a>>,
    stats: &'a StatsReport,
    notes: Vec<&'static str>,
    spec: &'a ExperimentSpec,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Writes every artifact of an experiment under `dir`.
pub fn write_outputs(dir: &Path, spec: &ExperimentSpec, output: &ExperimentOutput) -> Result<(), ExperimentError> {
    std::fs::create_dir_all(dir)?;
    // the echo leaves out the output location so that re-runs into other
    // directories stay byte-identical
    let echo = ExperimentSpec {
        out: None,
        ..spec.clone()
    };
    let spec = &echo;
    std::fs::write(dir.join("spec.toml"), spec.to_toml())?;
    save_frontier(&dir.join("reference_frontier.csv"), &output.reference)?;
    for r in &output.runs {
        let rd = run_dir(dir, r.method, r.seed);
        std::fs::create_dir_all(&rd)?;
        save_frontier(&rd.join("frontier.csv"), &rounded_frontier(&r.outcome.pareto))?;
        save_history(&rd.join("history.csv"), &r.outcome.history)?;
    }
    write_indicators(std::fs::File::create(dir.join("indicators.csv"))?, &output.rows)?;
    {
        let mut w = csv::Writer::from_path(dir.join("quality.csv")).map_err(FileError::from)?;
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
        w.write_record(["method", "runs_ok", "runs_failed", "sr", "aesr", "agsr"])
            .map_err(FileError::from)?;
        for q in &output.quality {
            w.write_record([
                q.method.name().to_string(),
                q.runs_ok.to_string(),
                q.runs_failed.to_string(),
                q.sr.to_string(),
                opt(q.aesr),
                opt(q.agsr),
            ])
            .map_err(FileError::from)?;
        }
        w.flush()?;
    }
    output.stats.write_csv(std::fs::File::create(dir.join("stats.csv"))?)?;
    let cells = output
        .quality
        .iter()
        .map(|q| Cell {
            quality: q,
            incomplete: q.runs_ok < spec.repeats,
            median_hypervolume: median(
                output
                    .rows
                    .iter()
                    .filter(|r| r.method == q.method && r.status == RunStatus::Ok)
                    .map(|r| r.hypervolume)
                    .collect(),
            ),
        })
        .collect();
    let mut notes = vec!["aesr column of indicators.csv: evaluations to first success, budget + 1 when never reached"];
    if spec.methods.contains(&Method::GridSearch) {
        notes.push("grid-search: 8x8x8 log-spaced lattice truncated to 510 points, an approximation of the published baseline");
    }
    let summary = Summary {
        version: crate::version(),
        base_seed: spec.base_seed,
        seeds: spec.seeds(),
        reference_hypervolume: output.reference_hv,
        reference_points: output.reference.len(),
        dropped_assets: &output.dropped_assets,
        cells,
        stats: &output.stats,
        notes,
        spec,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(())
}
