use num_traits::Float;

use super::{CostParams, PortfolioError};

/// Trading cost of the trade `u` (fractions of portfolio value, cash last
/// and cost-free): linear half-spread plus a 3/2-power market impact
/// `b * vol_i * |u_i|^{3/2} * sqrt(value / volume_i)`.
pub fn phi_trade(
    u: &[f64],
    day_vol: &[f64],
    volume: &[f64],
    portfolio_value: f64,
    costs: &CostParams,
) -> Result<f64, PortfolioError> {
    let n = day_vol.len();
    if volume.len() != n || u.len() < n {
        return Err(PortfolioError::DimensionMismatch {
            what: "trade",
            expected: n,
            got: volume.len().min(u.len()),
        });
    }
    if let Some(&v) = volume.iter().find(|v| **v < 0.0) {
        return Err(PortfolioError::NegativeVolume(v));
    }
    Ok((0..n)
        .map(|i| {
            let a = u[i].abs();
            costs.half_spread * a + impact_scale(day_vol[i], volume[i], portfolio_value, costs) * a * a.sqrt()
        })
        .sum())
}

/// `b * vol * sqrt(value / max(volume, floor * value))`
#[inline]
pub(crate) fn impact_scale(day_vol: f64, volume: f64, portfolio_value: f64, costs: &CostParams) -> f64 {
    if costs.impact_coeff == 0.0 || day_vol == 0.0 {
        return 0.0;
    }
    let v = volume.max(costs.volume_floor * portfolio_value.abs());
    costs.impact_coeff * day_vol * (portfolio_value.abs() / v).sqrt()
}

/// Holding cost: borrow fee on short risky positions. `w` holds risky
/// weights then cash; the cash entry is ignored.
pub fn phi_hold(w: &[f64], costs: &CostParams) -> f64 {
    let n = w.len().saturating_sub(1);
    costs.borrow_cost * w[..n].iter().map(|x| (-x).max(0.0)).sum::<f64>()
}
