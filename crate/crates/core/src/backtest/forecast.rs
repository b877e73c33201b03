use alloc::vec::Vec;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::BacktestError;
use crate::linalg::Matrix;

/// Daily volatility proxy `|ln close - ln open|`.
pub fn estimate_volatility(open: f64, close: f64) -> Result<f64, BacktestError> {
    if !(open > 0.0) || !(close > 0.0) {
        return Err(BacktestError::InvalidData("prices must be positive".into()));
    }
    Ok((close.ln() - open.ln()).abs())
}

/// Generator for the forecast noise of one `(seed, day)` pair.
pub fn noise_rng(seed: u64, day: i64) -> ChaCha8Rng {
    // splitmix-style mixing so neighbouring days get unrelated streams
    let mut z = seed ^ (day as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// `realized_i + eps_i` with `eps_i ~ N(0, (c * rolling_vol_i)^2)`, drawn in
/// asset order.
pub fn forecast_returns<R: Rng + ?Sized>(realized: &[f64], rolling_vol: &[f64], c: f64, rng: &mut R) -> Vec<f64> {
    realized
        .iter()
        .zip(rolling_vol)
        .map(|(&r, &v)| {
            let z: f64 = rng.sample(StandardNormal);
            r + c * v * z
        })
        .collect()
}

/// Trailing mean over the last `window` observations; the first
/// `window - 1` outputs average the available prefix.
pub fn moving_average(series: &[f64], window: usize) -> Result<Vec<f64>, BacktestError> {
    if series.is_empty() {
        return Err(BacktestError::InvalidData("empty series".into()));
    }
    if window == 0 {
        return Err(BacktestError::InvalidConfig("window must be at least 1"));
    }
    let mut out = Vec::with_capacity(series.len());
    for t in 0..series.len() {
        let lo = (t + 1).saturating_sub(window);
        let s = &series[lo..=t];
        out.push(s.iter().sum::<f64>() / s.len() as f64);
    }
    Ok(out)
}

/// Sample covariance of the last `window` rows of `returns` (day x asset),
/// shrunk 10% toward its diagonal and clipped to PSD. The result has one
/// extra all-zero row and column for cash.
pub fn forecast_covariance(returns: &[Vec<f64>], window: usize) -> Result<Matrix, BacktestError> {
    if window < 2 || returns.len() < window {
        return Err(BacktestError::InsufficientHistory {
            needed: window.max(2),
            got: returns.len(),
        });
    }
    let rows = &returns[returns.len() - window..];
    let n = rows[0].len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(BacktestError::InvalidData("ragged return matrix".into()));
    }
    let mut mean = alloc::vec![0.0; n];
    for r in rows {
        for (m, x) in mean.iter_mut().zip(r) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= window as f64);
    let mut s = Matrix::zeros(n);
    for r in rows {
        for i in 0..n {
            let di = r[i] - mean[i];
            for j in 0..=i {
                s[(i, j)] += di * (r[j] - mean[j]);
            }
        }
    }
    let denom = (window - 1) as f64;
    for i in 0..n {
        for j in 0..=i {
            let v = s[(i, j)] / denom * if i == j { 1.0 } else { 0.9 };
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    let s = s.psd_clipped();
    let mut out = Matrix::zeros(n + 1);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = s[(i, j)];
        }
    }
    Ok(out)
}
