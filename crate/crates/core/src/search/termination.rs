use alloc::vec::Vec;

use super::SearchError;
use crate::metrics::{igd_plus_minimization, FrontierSet};

/// True when the last `window` fronts have settled: after min-max
/// normalization over their union, the IGD+ movement between every pair of
/// consecutive fronts (taken in both directions) is below `tolerance`.
pub fn moo_space_termination(front_history: &[FrontierSet], tolerance: f64, window: usize) -> Result<bool, SearchError> {
    if !(tolerance > 0.0) {
        return Err(SearchError::Config("termination tolerance must be positive"));
    }
    if window < 2 {
        return Err(SearchError::Config("termination window must be at least 2"));
    }
    if front_history.len() < window {
        return Ok(false);
    }
    let recent = &front_history[front_history.len() - window..];
    if recent.iter().any(FrontierSet::is_empty) {
        return Ok(false);
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in recent.iter().flat_map(|f| f.iter()) {
        let v = p.to_minimization();
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    let span = [0, 1].map(|k| if hi[k] > lo[k] { hi[k] - lo[k] } else { 1.0 });
    let normalized: Vec<Vec<[f64; 2]>> = recent
        .iter()
        .map(|f| {
            f.iter()
                .map(|p| {
                    let v = p.to_minimization();
                    [(v[0] - lo[0]) / span[0], (v[1] - lo[1]) / span[1]]
                })
                .collect()
        })
        .collect();
    let movement = normalized
        .windows(2)
        .map(|w| igd_plus_minimization(&w[1], &w[0]).max(igd_plus_minimization(&w[0], &w[1])))
        .fold(0.0, f64::max);
    Ok(movement < tolerance)
}
