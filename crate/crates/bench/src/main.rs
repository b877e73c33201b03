use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use parden_bench::experiment::{reference_archive, run_experiment, run_method};
use parden_bench::files::{load_frontier, rounded_frontier, save_frontier, save_history, write_json};
use parden_bench::market::save_market;
use parden_bench::report::{read_indicators, Indicator, StatsReport};
use parden_bench::{ExperimentSpec, Method};
use parden_core::backtest::{gen_synthetic, HyperParamsDecoded, PreparedMarket};
use parden_core::metrics::{gd_plus, hypervolume, igd_plus};
use parden_core::ObjectivePoint;
use serde_json::json;

#[derive(Parser)]
#[command(name = "parden", version, about = "Surrogate-assisted search over portfolio trade-off parameters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

impl From<OnOff> for bool {
    fn from(v: OnOff) -> bool {
        matches!(v, OnOff::On)
    }
}

/// Flags shared by the subcommands that build an experiment spec.
#[derive(Args, Default)]
struct Common {
    /// TOML experiment spec; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    offspring: Option<usize>,
    /// Planning horizon of the optimizer (1 = single period).
    #[arg(long)]
    horizon: Option<usize>,
    /// Market CSV (`date,asset,open,close,volume`); synthetic market if absent.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn spec(&self) -> Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(p) => ExperimentSpec::load(p).with_context(|| format!("reading {}", p.display()))?,
            None => ExperimentSpec::default(),
        };
        if let Some(s) = self.seed {
            spec.base_seed = s;
        }
        if let Some(b) = self.budget {
            spec.search.budget = b;
        }
        if let Some(p) = self.pop {
            spec.search.population = p;
        }
        if let Some(o) = self.offspring {
            spec.search.offspring = o;
        }
        if let Some(h) = self.horizon {
            spec.backtest.horizon = h;
        }
        if let Some(d) = &self.data {
            spec.data.csv = Some(d.clone());
        }
        if let Some(o) = &self.out {
            spec.out = Some(o.clone());
        }
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic market as CSV.
    GenData {
        #[arg(long, default_value_t = 10)]
        assets: usize,
        #[arg(long, default_value_t = 750)]
        days: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Backtest one candidate and print its objectives.
    Backtest {
        /// Three genes in [0, 1], comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        genes: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// One search run.
    Search {
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long, value_enum)]
        acceptance: Option<OnOff>,
        #[arg(long, value_enum)]
        lookahead: Option<OnOff>,
        #[command(flatten)]
        common: Common,
    },
    /// Random-search reference frontier.
    Reference {
        /// Number of evaluations.
        #[arg(long)]
        count: Option<usize>,
        /// Use the full-size reference of 6510 evaluations.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Repeated runs of several methods with indicators and tests.
    Experiment {
        /// Methods to compare; repeat the flag to list several.
        #[arg(long = "method", value_enum)]
        methods: Vec<Method>,
        #[arg(long)]
        repeats: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Indicators of a frontier file against a reference frontier file.
    Metrics {
        #[arg(long)]
        frontier: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// Hypervolume reference point `risk,return`.
        #[arg(long, value_delimiter = ',', default_values_t = [40.0, 0.0])]
        hv_ref: Vec<f64>,
    },
    /// Pairwise one-sided tests from an indicators table.
    Stats {
        #[arg(long)]
        indicators: PathBuf,
        /// Method order; earlier methods are tested as better than later ones.
        /// Defaults to the order of first appearance.
        #[arg(long = "method", value_enum)]
        methods: Vec<Method>,
        /// Indicators to test (hv, gd_plus, igd_plus, aesr).
        #[arg(long, value_delimiter = ',', default_value = "hv,aesr")]
        tested: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn prepare(spec: &ExperimentSpec) -> Result<PreparedMarket> {
    let (data, dropped) = spec.data.load()?;
    for id in dropped {
        eprintln!("warning: dropped asset {id} with missing days");
    }
    Ok(PreparedMarket::new(&data, &spec.backtest.config(), spec.backtest.evaluation_seed)?)
}

fn out_dir(spec: &ExperimentSpec, fallback: &str) -> PathBuf {
    spec.out.clone().unwrap_or_else(|| PathBuf::from(fallback))
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::GenData { assets, days, seed, out } => {
            let spec = ExperimentSpec::default().data.synthetic_spec();
            let data = gen_synthetic(assets, days, seed, &spec)?;
            save_market(&out, &data)?;
            eprintln!("wrote {} assets x {} days to {}", assets, days, out.display());
        }
        Command::Backtest { genes, common } => {
            if genes.len() != 3 {
                bail!("--genes takes three values, got {}", genes.len());
            }
            let spec = common.spec()?;
            let market = prepare(&spec)?;
            let hp = HyperParamsDecoded::decode(&genes, &spec.backtest.boxes())?;
            let r = market.run(&hp, &spec.backtest.costs(), &spec.backtest.constraints())?;
            print_json(&json!({
                "gamma_risk": hp.gamma_risk,
                "gamma_trade": hp.gamma_trade,
                "gamma_hold": hp.gamma_hold,
                "risk_pct": r.objectives.risk_pct(),
                "return_pct": r.objectives.return_pct(),
                "final_value": r.final_value,
                "trading_days": r.daily_returns.len(),
                "evaluation_seed": r.evaluation_seed,
            }))?;
        }
        Command::Search {
            method,
            acceptance,
            lookahead,
            common,
        } => {
            let flags = match (acceptance, lookahead) {
                (None, None) => None,
                (a, l) => Some(Method::from_flags(
                    a.is_some_and(bool::from),
                    l.is_some_and(bool::from),
                )),
            };
            let method = match (method, flags) {
                (Some(m), Some(f)) if m != f => bail!("--method {m} conflicts with the --acceptance/--lookahead flags"),
                (Some(m), _) => m,
                (None, Some(f)) => f,
                (None, None) => Method::PardensurLookahead,
            };
            let spec = common.spec()?;
            spec.validate()?;
            let market = prepare(&spec)?;
            let run = run_method(method, &spec, &market, spec.base_seed)?;
            let dir = out_dir(&spec, "search-out");
            std::fs::create_dir_all(&dir)?;
            let front = rounded_frontier(&run.outcome.pareto);
            save_frontier(&dir.join("frontier.csv"), &front)?;
            save_history(&dir.join("history.csv"), &run.outcome.history)?;
            let summary = json!({
                "version": parden_bench::version(),
                "method": method.name(),
                "seed": run.seed,
                "evaluations": run.outcome.archive.len(),
                "simulator_calls": run.calls,
                "hypervolume": hypervolume(&front.points, &spec.search.hv_reference()?),
                "frontier_points": front.len(),
                "error": run.error,
                "spec": spec,
            });
            write_json(&dir.join("summary.json"), &summary)?;
            print_json(&summary)?;
        }
        Command::Reference { count, full, common } => {
            let mut spec = common.spec()?;
            spec.reference.evaluations = match (count, full) {
                (Some(c), _) => c,
                (None, true) => 6510,
                (None, false) => spec.reference.evaluations,
            };
            if let Some(s) = common.seed {
                spec.reference.seed = s;
            }
            spec.validate()?;
            let market = prepare(&spec)?;
            let archive = reference_archive(&spec, &market)?;
            let front = rounded_frontier(&archive.pareto());
            let dir = out_dir(&spec, "reference-out");
            std::fs::create_dir_all(&dir)?;
            save_frontier(&dir.join("reference_frontier.csv"), &front)?;
            let summary = json!({
                "version": parden_bench::version(),
                "evaluations": archive.len(),
                "seed": spec.reference.seed,
                "hypervolume": hypervolume(&front.points, &spec.search.hv_reference()?),
                "frontier_points": front.len(),
                "spec": spec,
            });
            write_json(&dir.join("summary.json"), &summary)?;
            print_json(&summary)?;
        }
        Command::Experiment { methods, repeats, common } => {
            let mut spec = common.spec()?;
            if !methods.is_empty() {
                spec.methods = methods;
            }
            if let Some(r) = repeats {
                spec.repeats = r;
            }
            let dir = out_dir(&spec, "experiment-out");
            let output = run_experiment(&spec, Some(&dir), &mut |msg| eprintln!("{msg}"))?;
            for q in &output.quality {
                println!(
                    "{:<22} ok {:>2} failed {:>2} sr {:>5.1}% aesr {}",
                    q.method.name(),
                    q.runs_ok,
                    q.runs_failed,
                    q.sr,
                    q.aesr.map_or("-".into(), |a| format!("{a:.1}"))
                );
            }
            for r in &output.stats.rows {
                println!(
                    "{:<9} {} vs {} ({}): p {:.4} adjusted {:.4}",
                    r.indicator.name(),
                    r.x,
                    r.y,
                    r.alternative,
                    r.p_value,
                    r.p_adjusted
                );
            }
            eprintln!("results in {}", dir.display());
        }
        Command::Metrics {
            frontier,
            reference,
            hv_ref,
        } => {
            if hv_ref.len() != 2 {
                bail!("--hv-ref takes two values");
            }
            let front = load_frontier(&frontier)?;
            let reference = load_frontier(&reference)?;
            let r = ObjectivePoint::new(hv_ref[0], hv_ref[1])?;
            print_json(&json!({
                "hypervolume": hypervolume(&front.points, &r),
                "reference_hypervolume": hypervolume(&reference.points, &r),
                "gd_plus": gd_plus(&front.points, &reference.points)?,
                "igd_plus": igd_plus(&front.points, &reference.points)?,
            }))?;
        }
        Command::Stats {
            indicators,
            methods,
            tested,
            out,
        } => {
            let rows = read_indicators(std::fs::File::open(&indicators).with_context(|| format!("opening {}", indicators.display()))?)?;
            let methods = if methods.is_empty() {
                let mut m: Vec<Method> = Vec::new();
                for r in &rows {
                    if !m.contains(&r.method) {
                        m.push(r.method);
                    }
                }
                m
            } else {
                methods
            };
            let tested = tested
                .iter()
                .map(|s| Indicator::parse(s.trim()).with_context(|| format!("unknown indicator {s:?}")))
                .collect::<Result<Vec<_>>>()?;
            let report = StatsReport::build(&rows, &methods, &tested)?;
            match out {
                Some(p) => report.write_csv(std::fs::File::create(Path::new(&p))?)?,
                None => report.write_csv(std::io::stdout())?,
            }
        }
    }
    Ok(())
}
