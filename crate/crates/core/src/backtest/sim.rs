use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use super::{estimate_volatility, forecast_covariance, forecast_returns, moving_average, noise_rng};
use super::{BacktestError, MarketData};
use crate::metrics::ObjectivePoint;
use crate::portfolio::{
    phi_hold, phi_trade, solve_mpo_with, ConstraintSet, CostParams, PeriodForecast, PortfolioState, SolverSettings,
    TradeOffParams, WarmStart,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BacktestConfig {
    /// Planning periods per solve.
    pub horizon: usize,
    /// Days reserved for the estimators before trading starts.
    pub burn_in: usize,
    /// Forecast noise standard deviation as a multiple of rolling volatility.
    pub noise_scale: f64,
    pub cov_window: usize,
    pub ma_window: usize,
    pub annualization_days: f64,
    pub initial_value: f64,
}

impl Default for BacktestConfig {
    fn default() -> Self {
        Self {
            horizon: 2,
            burn_in: 250,
            noise_scale: 1.0,
            cov_window: 250,
            ma_window: 10,
            annualization_days: 250.0,
            initial_value: 1e6,
        }
    }
}

impl BacktestConfig {
    pub fn validate(&self) -> Result<(), BacktestError> {
        if self.horizon == 0 {
            return Err(BacktestError::InvalidConfig("horizon must be at least 1"));
        }
        if self.cov_window < 2 || self.ma_window == 0 {
            return Err(BacktestError::InvalidConfig("windows too short"));
        }
        if self.burn_in < self.cov_window.max(self.ma_window) {
            return Err(BacktestError::InvalidConfig("burn_in must cover the estimation windows"));
        }
        if !(self.noise_scale >= 0.0) || !(self.annualization_days > 0.0) || !(self.initial_value > 0.0) {
            return Err(BacktestError::InvalidConfig("noise_scale, annualization_days, initial_value"));
        }
        Ok(())
    }
}

/// Log-uniform decode ranges for the three genes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeBoxes {
    pub gamma_risk: (f64, f64),
    pub gamma_trade: (f64, f64),
    pub gamma_hold: (f64, f64),
}

impl Default for DecodeBoxes {
    fn default() -> Self {
        Self {
            gamma_risk: (0.1, 1000.0),
            gamma_trade: (0.5, 100.0),
            gamma_hold: (0.1, 100.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParamsDecoded {
    pub gamma_risk: f64,
    pub gamma_trade: f64,
    pub gamma_hold: f64,
}

impl HyperParamsDecoded {
    /// Maps genes in [0, 1] to `lo * (hi / lo)^g` per parameter.
    pub fn decode(genes: &[f64], boxes: &DecodeBoxes) -> Result<Self, BacktestError> {
        if genes.len() != 3 {
            return Err(BacktestError::BadGeneCount { got: genes.len() });
        }
        let map = |g: f64, (lo, hi): (f64, f64)| {
            let g = g.clamp(0.0, 1.0);
            10f64.powf(lo.log10() + g * (hi.log10() - lo.log10()))
        };
        Ok(Self {
            gamma_risk: map(genes[0], boxes.gamma_risk),
            gamma_trade: map(genes[1], boxes.gamma_trade),
            gamma_hold: map(genes[2], boxes.gamma_hold),
        })
    }

    pub fn trade_off(&self) -> Result<TradeOffParams, BacktestError> {
        Ok(TradeOffParams::new(self.gamma_risk, self.gamma_trade, self.gamma_hold)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestResult {
    pub daily_returns: Vec<f64>,
    pub objectives: ObjectivePoint,
    /// Sum of absolute risky-weight changes per trading day.
    pub turnover: Vec<f64>,
    pub final_value: f64,
    pub evaluation_seed: u64,
}

/// `(std * sqrt(A) * 100, mean * A * 100)` of the daily returns.
pub fn objectives_from_returns(daily: &[f64], annualization_days: f64) -> Result<ObjectivePoint, BacktestError> {
    let n = daily.len();
    if n == 0 {
        return Err(BacktestError::InsufficientHistory { needed: 1, got: 0 });
    }
    let mean = daily.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        daily.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    ObjectivePoint::new(var.sqrt() * annualization_days.sqrt() * 100.0, mean * annualization_days * 100.0)
        .map_err(|_| BacktestError::InvalidData("non-finite objectives".into()))
}

struct Day {
    index: usize,
    forecasts: Vec<PeriodForecast>,
    next_returns: Vec<f64>,
    realized_vol: Vec<f64>,
    realized_volume: Vec<f64>,
}

/// Forecasts and realized quantities for every trading day, shared by all
/// candidates evaluated on the same market and noise seed.
pub struct PreparedMarket {
    config: BacktestConfig,
    seed: u64,
    n_assets: usize,
    days: Vec<Day>,
}

impl PreparedMarket {
    pub fn new(data: &MarketData, cfg: &BacktestConfig, seed: u64) -> Result<Self, BacktestError> {
        cfg.validate()?;
        let t_total = data.n_days();
        if t_total < cfg.burn_in + 2 {
            return Err(BacktestError::InsufficientHistory {
                needed: cfg.burn_in + 2,
                got: t_total,
            });
        }
        let n = data.n_assets();
        // returns[s - 1] is the return from day s - 1 to day s
        let returns: Vec<Vec<f64>> = (1..t_total).map(|s| data.returns_at(s)).collect();
        let mut vol_ma = Vec::with_capacity(n);
        let mut volume_ma = Vec::with_capacity(n);
        let mut realized_vol = Vec::with_capacity(n);
        for a in data.assets() {
            let v = a
                .open
                .iter()
                .zip(&a.close)
                .map(|(&o, &c)| estimate_volatility(o, c))
                .collect::<Result<Vec<_>, _>>()?;
            vol_ma.push(moving_average(&v, cfg.ma_window)?);
            volume_ma.push(moving_average(&a.volume, cfg.ma_window)?);
            realized_vol.push(v);
        }
        let mut days = Vec::with_capacity(t_total - cfg.burn_in - 1);
        for t in cfg.burn_in..t_total - 1 {
            let sigma = forecast_covariance(&returns[..t], cfg.cov_window)?;
            let rolling_vol: Vec<f64> = (0..n).map(|i| sigma[(i, i)].max(0.0).sqrt()).collect();
            let next = &returns[t];
            let mut rng = noise_rng(seed, data.dates()[t]);
            let mut mu = forecast_returns(next, &rolling_vol, cfg.noise_scale, &mut rng);
            mu.push(0.0);
            let forecast = PeriodForecast::new(
                mu,
                sigma,
                (0..n).map(|i| vol_ma[i][t]).collect(),
                (0..n).map(|i| volume_ma[i][t]).collect(),
            )?;
            days.push(Day {
                index: t,
                forecasts: vec![forecast; cfg.horizon],
                next_returns: next.clone(),
                realized_vol: (0..n).map(|i| realized_vol[i][t]).collect(),
                realized_volume: data.assets().iter().map(|a| a.volume[t]).collect(),
            });
        }
        Ok(Self {
            config: *cfg,
            seed,
            n_assets: n,
            days,
        })
    }

    pub fn config(&self) -> &BacktestConfig {
        &self.config
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_assets(&self) -> usize {
        self.n_assets
    }

    pub fn trading_days(&self) -> usize {
        self.days.len()
    }

    /// Starts all-cash; each day solves the planning problem, trades to its
    /// first period at the close, pays realized costs and earns the next
    /// close-to-close return.
    pub fn run(
        &self,
        hp: &HyperParamsDecoded,
        costs: &CostParams,
        cons: &ConstraintSet,
    ) -> Result<BacktestResult, BacktestError> {
        let params = hp.trade_off()?;
        let settings = SolverSettings::default();
        let n = self.n_assets;
        let mut value = self.config.initial_value;
        let mut w = PortfolioState::all_cash(n, value).weights().to_vec();
        let mut warm: Option<WarmStart> = None;
        let mut daily = Vec::with_capacity(self.days.len());
        let mut turnover = Vec::with_capacity(self.days.len());
        for day in &self.days {
            let state = PortfolioState::new(w.clone(), value).map_err(|source| BacktestError::Solver {
                day: day.index,
                source,
            })?;
            let sol = solve_mpo_with(&state, &day.forecasts, &params, costs, cons, &settings, warm.as_ref())
                .map_err(|source| BacktestError::Solver { day: day.index, source })?;
            let target = sol.plan[0].weights();
            let trade: Vec<f64> = target.iter().zip(&w).map(|(a, b)| a - b).collect();
            let trade_cost = phi_trade(&trade, &day.realized_vol, &day.realized_volume, value, costs)?;
            let hold_cost = phi_hold(target, costs);
            let gross: f64 = target[..n].iter().zip(&day.next_returns).map(|(a, r)| a * r).sum();
            let r = gross - trade_cost - hold_cost;
            let growth = 1.0 + r;
            if !(growth > 0.0) {
                return Err(BacktestError::InvalidData(alloc::format!("portfolio wiped out on day {}", day.index)));
            }
            for i in 0..n {
                w[i] = target[i] * (1.0 + day.next_returns[i]) / growth;
            }
            w[n] = (target[n] - trade_cost - hold_cost) / growth;
            // keep the budget exact against rounding drift
            let total: f64 = w.iter().sum();
            w[n] += 1.0 - total;
            value *= growth;
            daily.push(r);
            turnover.push(trade[..n].iter().map(|x| x.abs()).sum());
            warm = Some(sol.warm.shifted());
        }
        Ok(BacktestResult {
            objectives: objectives_from_returns(&daily, self.config.annualization_days)?,
            daily_returns: daily,
            turnover,
            final_value: value,
            evaluation_seed: self.seed,
        })
    }
}

/// Prepares the market and runs one candidate.
pub fn run_backtest(
    data: &MarketData,
    hp: &HyperParamsDecoded,
    cfg: &BacktestConfig,
    costs: &CostParams,
    cons: &ConstraintSet,
    seed: u64,
) -> Result<BacktestResult, BacktestError> {
    PreparedMarket::new(data, cfg, seed)?.run(hp, costs, cons)
}
