use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::BacktestError;

/// One asset's daily open/close prices and traded value.
#[derive(Debug, Clone, PartialEq)]
pub struct AssetSeries {
    pub id: String,
    pub open: Vec<f64>,
    pub close: Vec<f64>,
    pub volume: Vec<f64>,
}

/// Daily prices for a fixed universe. Dates are day numbers counted from
/// 1970-01-01.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketData {
    dates: Vec<i64>,
    assets: Vec<AssetSeries>,
}

impl MarketData {
    pub fn new(dates: Vec<i64>, assets: Vec<AssetSeries>) -> Result<Self, BacktestError> {
        if assets.is_empty() {
            return Err(BacktestError::InvalidData("no assets".into()));
        }
        if dates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BacktestError::InvalidData("dates must be strictly increasing".into()));
        }
        let t = dates.len();
        for a in &assets {
            if a.open.len() != t || a.close.len() != t || a.volume.len() != t {
                return Err(BacktestError::InvalidData(format!("asset {} has misaligned series", a.id)));
            }
            for (day, (&o, &c)) in a.open.iter().zip(&a.close).enumerate() {
                for value in [o, c] {
                    if !(value > 0.0) || !value.is_finite() {
                        return Err(BacktestError::NonPositivePrice {
                            asset: a.id.clone(),
                            day,
                            value,
                        });
                    }
                }
            }
            if let Some(v) = a.volume.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
                return Err(BacktestError::InvalidData(format!("asset {} has volume {v}", a.id)));
            }
        }
        Ok(Self { dates, assets })
    }

    pub fn dates(&self) -> &[i64] {
        &self.dates
    }

    pub fn assets(&self) -> &[AssetSeries] {
        &self.assets
    }

    pub fn n_assets(&self) -> usize {
        self.assets.len()
    }

    pub fn n_days(&self) -> usize {
        self.dates.len()
    }

    /// Close-to-close simple return of every asset from `day - 1` to `day`.
    pub fn returns_at(&self, day: usize) -> Vec<f64> {
        self.assets.iter().map(|a| a.close[day] / a.close[day - 1] - 1.0).collect()
    }
}

/// Parameters of the synthetic market. Drift and volatility are annual and
/// drawn uniformly per asset from their ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub drift: (f64, f64),
    pub vol: (f64, f64),
    /// Common pairwise correlation of daily log-returns, in [0, 1).
    pub correlation: f64,
    /// Open-price noise as a fraction of the asset's daily volatility.
    pub intraday: f64,
    /// Median daily traded value.
    pub volume_median: f64,
    /// Standard deviation of log traded value.
    pub volume_log_sd: f64,
    pub first_date: i64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            drift: (0.0, 0.15),
            vol: (0.4, 0.7),
            correlation: 0.3,
            intraday: 0.5,
            volume_median: 1e8,
            volume_log_sd: 0.3,
            // 2015-01-02
            first_date: 16437,
        }
    }
}

/// The first `n` weekdays on or after `first`.
pub fn business_days(first: i64, n: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(n);
    let mut d = first;
    while out.len() < n {
        // 1970-01-01 was a Thursday
        if (d + 3).rem_euclid(7) < 5 {
            out.push(d);
        }
        d += 1;
    }
    out
}

/// Correlated geometric Brownian motion closes; each open is the previous
/// close moved by intraday noise; log-normal traded values.
pub fn gen_synthetic(n_assets: usize, n_days: usize, seed: u64, spec: &SyntheticSpec) -> Result<MarketData, BacktestError> {
    if n_assets == 0 || n_days < 2 {
        return Err(BacktestError::InvalidConfig("need at least one asset and two days"));
    }
    if !(0.0..1.0).contains(&spec.correlation) {
        return Err(BacktestError::InvalidConfig("correlation must be in [0, 1)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| if hi > lo { rng.random_range(lo..hi) } else { lo };
    let params: Vec<(f64, f64)> = (0..n_assets)
        .map(|_| {
            let mu = draw(&mut rng, spec.drift);
            let sigma = draw(&mut rng, spec.vol);
            (mu, sigma)
        })
        .collect();
    let dt = 1.0 / 250.0;
    let common = spec.correlation.sqrt();
    let idio = (1.0 - spec.correlation).sqrt();
    let mut assets: Vec<AssetSeries> = (0..n_assets)
        .map(|i| AssetSeries {
            id: format!("A{:02}", i + 1),
            open: Vec::with_capacity(n_days),
            close: Vec::with_capacity(n_days),
            volume: Vec::with_capacity(n_days),
        })
        .collect();
    let mut last = alloc::vec![100.0; n_assets];
    for day in 0..n_days {
        let m: f64 = rng.sample(StandardNormal);
        for (i, a) in assets.iter_mut().enumerate() {
            let (mu, sigma) = params[i];
            let daily = sigma * dt.sqrt();
            let z: f64 = rng.sample(StandardNormal);
            let e: f64 = rng.sample(StandardNormal);
            let v: f64 = rng.sample(StandardNormal);
            let close = if day == 0 {
                last[i]
            } else {
                last[i] * ((mu - 0.5 * sigma * sigma) * dt + daily * (common * m + idio * z)).exp()
            };
            a.open.push(last[i] * (spec.intraday * daily * e).exp());
            a.close.push(close);
            a.volume.push(spec.volume_median * (spec.volume_log_sd * v).exp());
            last[i] = close;
        }
    }
    MarketData::new(business_days(spec.first_date, n_days), assets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn business_days_skip_weekends() {
        // 2015-01-02 is a Friday
        let d = business_days(16437, 3);
        assert_eq!(d, [16437, 16440, 16441]);
    }

    #[test]
    fn zero_vol_is_exponential() {
        let spec = SyntheticSpec {
            drift: (0.1, 0.1),
            vol: (0.0, 0.0),
            ..SyntheticSpec::default()
        };
        let m = gen_synthetic(2, 50, 1, &spec).unwrap();
        let g = (0.1f64 / 250.0).exp();
        for a in m.assets() {
            for t in 1..50 {
                assert!((a.close[t] / a.close[t - 1] - g).abs() < 1e-12);
                assert_eq!(a.open[t], a.close[t - 1]);
            }
        }
    }

    #[test]
    fn rejects_bad_prices() {
        let a = AssetSeries {
            id: "X".into(),
            open: alloc::vec![1.0, 0.0],
            close: alloc::vec![1.0, 1.0],
            volume: alloc::vec![1.0, 1.0],
        };
        assert!(matches!(
            MarketData::new(alloc::vec![0, 1], alloc::vec![a]),
            Err(BacktestError::NonPositivePrice { day: 1, .. })
        ));
    }
}
