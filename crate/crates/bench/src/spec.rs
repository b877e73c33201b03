//! Experiment specification and its TOML form.

use std::path::{Path, PathBuf};

use parden_core::backtest::{gen_synthetic, BacktestConfig, DecodeBoxes, MarketData, SyntheticSpec};
use parden_core::portfolio::{ConstraintSet, CostParams};
use parden_core::search::SearchConfig;
use parden_core::ObjectivePoint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market::{load_market, MarketFileError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Nsga2,
    Rnsga2,
    PardensurAcceptance,
    PardensurLookahead,
    PardensurBoth,
    PardensurPlain,
    RandomSearch,
    GridSearch,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Nsga2,
        Method::Rnsga2,
        Method::PardensurAcceptance,
        Method::PardensurLookahead,
        Method::PardensurBoth,
        Method::PardensurPlain,
        Method::RandomSearch,
        Method::GridSearch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Nsga2 => "nsga2",
            Method::Rnsga2 => "rnsga2",
            Method::PardensurAcceptance => "pardensur-acceptance",
            Method::PardensurLookahead => "pardensur-lookahead",
            Method::PardensurBoth => "pardensur-both",
            Method::PardensurPlain => "pardensur-plain",
            Method::RandomSearch => "random-search",
            Method::GridSearch => "grid-search",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == s)
    }

    /// `(acceptance, look_ahead)` for the surrogate-assisted variants.
    pub fn flags(self) -> Option<(bool, bool)> {
        match self {
            Method::PardensurAcceptance => Some((true, false)),
            Method::PardensurLookahead => Some((false, true)),
            Method::PardensurBoth => Some((true, true)),
            Method::PardensurPlain => Some((false, false)),
            _ => None,
        }
    }

    pub fn from_flags(acceptance: bool, look_ahead: bool) -> Method {
        match (acceptance, look_ahead) {
            (true, false) => Method::PardensurAcceptance,
            (false, true) => Method::PardensurLookahead,
            (true, true) => Method::PardensurBoth,
            (false, false) => Method::PardensurPlain,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("invalid experiment spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Market(#[from] MarketFileError),
    #[error(transparent)]
    Backtest(#[from] parden_core::backtest::BacktestError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSection {
    pub budget: usize,
    pub population: usize,
    pub offspring: usize,
    pub look_ahead_tolerance: f64,
    pub look_ahead_window: usize,
    pub look_ahead_max_generations: usize,
    pub acceptance_draw_cap_factor: usize,
    pub k_folds: usize,
    /// Hypervolume reference point `[risk, return]`.
    pub hv_reference: [f64; 2],
}

impl Default for SearchSection {
    fn default() -> Self {
        let c = SearchConfig::default();
        Self {
            budget: c.budget,
            population: c.population,
            offspring: c.offspring,
            look_ahead_tolerance: c.look_ahead_tolerance,
            look_ahead_window: c.look_ahead_window,
            look_ahead_max_generations: c.look_ahead_max_generations,
            acceptance_draw_cap_factor: c.acceptance_draw_cap_factor,
            k_folds: c.k_folds,
            hv_reference: [c.hv_reference.risk_pct(), c.hv_reference.return_pct()],
        }
    }
}

impl SearchSection {
    pub fn to_config(&self, method: Method, seed: u64) -> Result<SearchConfig, SpecError> {
        let (acceptance, look_ahead) = method.flags().unwrap_or((false, false));
        Ok(SearchConfig {
            budget: self.budget,
            population: self.population,
            offspring: self.offspring,
            acceptance,
            look_ahead,
            look_ahead_tolerance: self.look_ahead_tolerance,
            look_ahead_window: self.look_ahead_window,
            look_ahead_max_generations: self.look_ahead_max_generations,
            acceptance_draw_cap_factor: self.acceptance_draw_cap_factor,
            k_folds: self.k_folds,
            seed,
            hv_reference: self.hv_reference()?,
        })
    }

    pub fn hv_reference(&self) -> Result<ObjectivePoint, SpecError> {
        ObjectivePoint::new(self.hv_reference[0], self.hv_reference[1])
            .map_err(|e| SpecError::Invalid(format!("hv_reference: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BacktestSection {
    pub horizon: usize,
    pub burn_in: usize,
    pub noise_scale: f64,
    pub cov_window: usize,
    pub ma_window: usize,
    pub annualization_days: f64,
    pub initial_value: f64,
    /// Seeds the forecast noise; shared by every candidate and run.
    pub evaluation_seed: u64,
    pub gamma_risk: [f64; 2],
    pub gamma_trade: [f64; 2],
    pub gamma_hold: [f64; 2],
    pub half_spread: f64,
    pub impact_coeff: f64,
    pub borrow_cost: f64,
    pub max_weight: Option<f64>,
}

impl Default for BacktestSection {
    fn default() -> Self {
        let b = BacktestConfig::default();
        let d = DecodeBoxes::default();
        let c = CostParams::default();
        Self {
            horizon: b.horizon,
            burn_in: b.burn_in,
            noise_scale: b.noise_scale,
            cov_window: b.cov_window,
            ma_window: b.ma_window,
            annualization_days: b.annualization_days,
            initial_value: b.initial_value,
            evaluation_seed: 7,
            gamma_risk: d.gamma_risk.into(),
            gamma_trade: d.gamma_trade.into(),
            gamma_hold: d.gamma_hold.into(),
            half_spread: c.half_spread,
            impact_coeff: c.impact_coeff,
            borrow_cost: c.borrow_cost,
            max_weight: None,
        }
    }
}

impl BacktestSection {
    pub fn config(&self) -> BacktestConfig {
        BacktestConfig {
            horizon: self.horizon,
            burn_in: self.burn_in,
            noise_scale: self.noise_scale,
            cov_window: self.cov_window,
            ma_window: self.ma_window,
            annualization_days: self.annualization_days,
            initial_value: self.initial_value,
        }
    }

    pub fn boxes(&self) -> DecodeBoxes {
        DecodeBoxes {
            gamma_risk: self.gamma_risk.into(),
            gamma_trade: self.gamma_trade.into(),
            gamma_hold: self.gamma_hold.into(),
        }
    }

    pub fn costs(&self) -> CostParams {
        CostParams {
            half_spread: self.half_spread,
            impact_coeff: self.impact_coeff,
            borrow_cost: self.borrow_cost,
            ..CostParams::default()
        }
    }

    pub fn constraints(&self) -> ConstraintSet {
        ConstraintSet {
            max_weight: self.max_weight,
            ..ConstraintSet::default()
        }
    }
}

/// Market source: a CSV file when `csv` is set, otherwise a synthetic
/// market.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub csv: Option<PathBuf>,
    pub n_assets: usize,
    pub n_days: usize,
    pub seed: u64,
    pub drift: [f64; 2],
    pub vol: [f64; 2],
    pub correlation: f64,
}

impl Default for DataSection {
    fn default() -> Self {
        let s = SyntheticSpec::default();
        Self {
            csv: None,
            n_assets: 10,
            n_days: 750,
            seed: 42,
            drift: s.drift.into(),
            vol: s.vol.into(),
            correlation: s.correlation,
        }
    }
}

impl DataSection {
    pub fn synthetic_spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            drift: self.drift.into(),
            vol: self.vol.into(),
            correlation: self.correlation,
            ..SyntheticSpec::default()
        }
    }

    /// The market plus the ids of dropped incomplete assets.
    pub fn load(&self) -> Result<(MarketData, Vec<String>), SpecError> {
        match &self.csv {
            Some(path) => {
                let m = load_market(path)?;
                Ok((m.data, m.dropped))
            }
            None => Ok((
                gen_synthetic(self.n_assets, self.n_days, self.seed, &self.synthetic_spec())?,
                Vec::new(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceSection {
    /// Random-search evaluations behind the reference frontier.
    pub evaluations: usize,
    pub seed: u64,
}

impl Default for ReferenceSection {
    fn default() -> Self {
        Self {
            evaluations: 2000,
            seed: 999,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub methods: Vec<Method>,
    pub repeats: usize,
    /// Run `i` uses seed `base_seed + i`.
    pub base_seed: u64,
    /// Fraction of the reference hypervolume that counts as success.
    pub threshold: f64,
    /// Indicators tested pairwise; see [`crate::report::Indicator`].
    pub tested: Vec<crate::report::Indicator>,
    pub out: Option<PathBuf>,
    pub search: SearchSection,
    pub backtest: BacktestSection,
    pub data: DataSection,
    pub reference: ReferenceSection,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            methods: vec![Method::PardensurLookahead, Method::Nsga2],
            repeats: 10,
            base_seed: 0,
            threshold: 0.95,
            tested: vec![crate::report::Indicator::Hv, crate::report::Indicator::Aesr],
            out: None,
            search: SearchSection::default(),
            backtest: BacktestSection::default(),
            data: DataSection::default(),
            reference: ReferenceSection::default(),
        }
    }
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self, SpecError> {
        let spec: Self = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.repeats as u64).map(|i| self.base_seed + i).collect()
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let bad = |m: &str| Err(SpecError::Invalid(m.to_string()));
        if self.repeats == 0 {
            return bad("repeats must be at least 1");
        }
        if self.methods.is_empty() {
            return bad("no methods");
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return bad("methods listed twice");
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return bad("threshold must lie in (0, 1]");
        }
        if self.reference.evaluations == 0 {
            return bad("reference evaluations must be positive");
        }
        self.search
            .to_config(Method::PardensurBoth, 0)?
            .validate()
            .map_err(|e| SpecError::Invalid(e.to_string()))?;
        self.backtest
            .config()
            .validate()
            .map_err(|e| SpecError::Invalid(e.to_string()))?;
        Ok(())
    }
}
