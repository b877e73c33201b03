use alloc::vec::Vec;

use super::PortfolioError;
use crate::linalg::Matrix;

/// Portfolio weights (risky assets, then cash) and total value.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioState {
    pub(crate) weights: Vec<f64>,
    pub portfolio_value: f64,
}

impl PortfolioState {
    pub fn new(weights: Vec<f64>, portfolio_value: f64) -> Result<Self, PortfolioError> {
        if weights.iter().any(|w| !w.is_finite()) || !portfolio_value.is_finite() {
            return Err(PortfolioError::NonFinite("portfolio state"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(PortfolioError::BudgetViolated(sum));
        }
        Ok(Self {
            weights,
            portfolio_value,
        })
    }

    /// Everything in cash.
    pub fn all_cash(n_assets: usize, portfolio_value: f64) -> Self {
        let mut weights = alloc::vec![0.0; n_assets + 1];
        weights[n_assets] = 1.0;
        Self {
            weights,
            portfolio_value,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n_assets(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn cash(&self) -> f64 {
        self.weights[self.weights.len() - 1]
    }
}

/// Return and risk forecasts for one period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodForecast {
    mu: Vec<f64>,
    sigma: Matrix,
    day_vol: Vec<f64>,
    volume: Vec<f64>,
    max_eigenvalue: f64,
}

impl PeriodForecast {
    /// Validates dimensions and symmetry (1e-12), then clips negative
    /// eigenvalues of `sigma` to zero. `mu` and `sigma` include the cash
    /// coordinate last; `day_vol` and `volume` cover the risky assets only.
    pub fn new(mu: Vec<f64>, sigma: Matrix, day_vol: Vec<f64>, volume: Vec<f64>) -> Result<Self, PortfolioError> {
        let m = mu.len();
        if m < 2 {
            return Err(PortfolioError::DimensionMismatch {
                what: "mu",
                expected: 2,
                got: m,
            });
        }
        for (what, got, expected) in [
            ("sigma", sigma.dim(), m),
            ("day_vol", day_vol.len(), m - 1),
            ("volume", volume.len(), m - 1),
        ] {
            if got != expected {
                return Err(PortfolioError::DimensionMismatch { what, expected, got });
            }
        }
        if mu.iter().chain(sigma.as_slice()).chain(&day_vol).chain(&volume).any(|x| !x.is_finite()) {
            return Err(PortfolioError::NonFinite("forecast"));
        }
        if let Some(&v) = volume.iter().find(|v| **v < 0.0) {
            return Err(PortfolioError::NegativeVolume(v));
        }
        if day_vol.iter().any(|v| *v < 0.0) {
            return Err(PortfolioError::InvalidParameter("day_vol"));
        }
        let asym = sigma.max_asymmetry();
        if asym > 1e-12 {
            return Err(PortfolioError::Asymmetric(asym));
        }
        let c = m - 1;
        if (0..m).any(|i| sigma[(i, c)] != 0.0 || sigma[(c, i)] != 0.0) {
            return Err(PortfolioError::CashRisk);
        }
        let mut sigma = sigma.psd_clipped();
        for i in 0..m {
            sigma[(i, c)] = 0.0;
            sigma[(c, i)] = 0.0;
        }
        let max_eigenvalue = sigma.max_eigenvalue();
        Ok(Self {
            mu,
            sigma,
            day_vol,
            volume,
            max_eigenvalue,
        })
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    pub fn day_vol(&self) -> &[f64] {
        &self.day_vol
    }

    pub fn volume(&self) -> &[f64] {
        &self.volume
    }

    pub fn n_assets(&self) -> usize {
        self.mu.len() - 1
    }

    pub(crate) fn max_eigenvalue(&self) -> f64 {
        self.max_eigenvalue
    }
}

/// Risk, trading-cost and holding-cost trade-off parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeOffParams {
    pub gamma_risk: f64,
    pub gamma_trade: f64,
    pub gamma_hold: f64,
}

impl TradeOffParams {
    pub fn new(gamma_risk: f64, gamma_trade: f64, gamma_hold: f64) -> Result<Self, PortfolioError> {
        let p = Self {
            gamma_risk,
            gamma_trade,
            gamma_hold,
        };
        p.validate()?;
        Ok(p)
    }

    pub(crate) fn validate(&self) -> Result<(), PortfolioError> {
        if !(self.gamma_risk > 0.0) || !self.gamma_risk.is_finite() {
            return Err(PortfolioError::InvalidParameter("gamma_risk"));
        }
        if !(self.gamma_trade >= 0.0) || !self.gamma_trade.is_finite() {
            return Err(PortfolioError::InvalidParameter("gamma_trade"));
        }
        if !(self.gamma_hold >= 0.0) || !self.gamma_hold.is_finite() {
            return Err(PortfolioError::InvalidParameter("gamma_hold"));
        }
        Ok(())
    }
}

/// Trading and holding cost model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    /// Fraction of traded value paid as half the bid-ask spread.
    pub half_spread: f64,
    /// Market-impact coefficient `b`.
    pub impact_coeff: f64,
    /// Daily borrow fee on short exposure.
    pub borrow_cost: f64,
    /// Volumes below `volume_floor * portfolio_value` are raised to it.
    pub volume_floor: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            half_spread: 0.00025,
            impact_coeff: 1.0,
            borrow_cost: 0.0001,
            volume_floor: 1e-6,
        }
    }
}

impl CostParams {
    pub fn zero() -> Self {
        Self {
            half_spread: 0.0,
            impact_coeff: 0.0,
            borrow_cost: 0.0,
            volume_floor: 1e-6,
        }
    }

    pub(crate) fn validate(&self) -> Result<(), PortfolioError> {
        for (name, v) in [
            ("half_spread", self.half_spread),
            ("impact_coeff", self.impact_coeff),
            ("borrow_cost", self.borrow_cost),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(PortfolioError::InvalidParameter(name));
            }
        }
        if !(self.volume_floor > 0.0) {
            return Err(PortfolioError::InvalidParameter("volume_floor"));
        }
        Ok(())
    }
}

/// Holding constraints. Risky weights are bounded below by 0 when
/// `long_only`, above by `max_weight`; cash by `min_cash`/`max_cash`
/// (defaulting to 0 / unbounded when long-only, unbounded otherwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSet {
    pub long_only: bool,
    pub max_weight: Option<f64>,
    pub min_cash: Option<f64>,
    pub max_cash: Option<f64>,
}

impl Default for ConstraintSet {
    fn default() -> Self {
        Self {
            long_only: true,
            max_weight: None,
            min_cash: None,
            max_cash: None,
        }
    }
}

impl ConstraintSet {
    /// Budget constraint only, with cash pinned at zero.
    pub fn budget_only_without_cash() -> Self {
        Self {
            long_only: false,
            max_weight: None,
            min_cash: Some(0.0),
            max_cash: Some(0.0),
        }
    }

    /// `(lower, upper)` for every coordinate of an `n_assets + 1` vector.
    pub(crate) fn bounds(&self, n_assets: usize) -> Vec<(f64, f64)> {
        let asset_lo = if self.long_only { 0.0 } else { f64::NEG_INFINITY };
        let asset_hi = self.max_weight.unwrap_or(f64::INFINITY);
        let cash_lo = self.min_cash.unwrap_or(asset_lo);
        let cash_hi = self.max_cash.unwrap_or(f64::INFINITY);
        let mut b = alloc::vec![(asset_lo, asset_hi); n_assets];
        b.push((cash_lo, cash_hi));
        b
    }

    pub(crate) fn check_feasible(&self, n_assets: usize) -> Result<(), PortfolioError> {
        let b = self.bounds(n_assets);
        let lo: f64 = b.iter().map(|x| x.0).sum();
        let hi: f64 = b.iter().map(|x| x.1).sum();
        if b.iter().any(|(l, h)| l > h || l.is_nan() || h.is_nan()) || lo > 1.0 || hi < 1.0 {
            return Err(PortfolioError::Infeasible);
        }
        Ok(())
    }
}
