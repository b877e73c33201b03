//! Market data, forecast construction and the rolling-horizon backtest
//! that maps trade-off parameters to realized (risk %, return %).

mod data;
mod forecast;
mod sim;

pub use data::{business_days, gen_synthetic, AssetSeries, MarketData, SyntheticSpec};
pub use forecast::{estimate_volatility, forecast_covariance, forecast_returns, moving_average, noise_rng};
pub use sim::{
    objectives_from_returns, run_backtest, BacktestConfig, BacktestResult, DecodeBoxes, HyperParamsDecoded,
    PreparedMarket,
};

use alloc::string::String;
use thiserror::Error;

use crate::portfolio::PortfolioError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BacktestError {
    #[error("invalid market data: {0}")]
    InvalidData(String),
    #[error("non-positive price {value} for asset {asset} on day {day}")]
    NonPositivePrice { asset: String, day: usize, value: f64 },
    #[error("need at least {needed} days of history, got {got}")]
    InsufficientHistory { needed: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("gene vector has {got} entries, expected 3")]
    BadGeneCount { got: usize },
    #[error("portfolio optimization failed on day {day}: {source}")]
    Solver { day: usize, source: PortfolioError },
    #[error(transparent)]
    Portfolio(#[from] PortfolioError),
}
