//! Rank tests used to compare repeated search runs.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("p-value {0} outside [0, 1]")]
    PValueOutOfRange(f64),
}

/// Direction of a one-sided two-sample test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alternative {
    /// `x` tends to be larger than `y`.
    XGreater,
    /// `x` tends to be smaller than `y`.
    XLess,
}

impl Alternative {
    pub fn flipped(self) -> Self {
        match self {
            Alternative::XGreater => Alternative::XLess,
            Alternative::XLess => Alternative::XGreater,
        }
    }
}

/// Combined samples at or below this size use the exact permutation
/// distribution.
pub const EXACT_LIMIT: usize = 20;

/// Doubled midranks of `x` followed by `y`, plus the tie group sizes.
fn doubled_midranks(x: &[f64], y: &[f64]) -> (Vec<u32>, Vec<usize>) {
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut ranks = vec![0u32; pooled.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && pooled[order[j]] == pooled[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j share (i + 1 + j) / 2
        let r2 = (i + 1 + j) as u32;
        for &k in &order[i..j] {
            ranks[k] = r2;
        }
        ties.push(j - i);
        i = j;
    }
    (ranks, ties)
}

/// One-sided Mann-Whitney U test p-value: exact permutation distribution
/// of the rank sum (midranks for ties) when `|x| + |y| <= 20`, normal
/// approximation with tie and continuity correction otherwise.
pub fn mann_whitney_one_sided(x: &[f64], y: &[f64], alternative: Alternative) -> Result<f64, StatsError> {
    if x.is_empty() || y.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let (ranks, ties) = doubled_midranks(x, y);
    let w2: u32 = ranks[..x.len()].iter().sum();
    let p = if x.len() + y.len() <= EXACT_LIMIT {
        exact_tail(&ranks, x.len(), w2, alternative)
    } else {
        normal_tail(x.len(), y.len(), w2, &ties, alternative)
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Probability that a random `n`-subset of `ranks` has doubled rank sum in
/// the tail beyond `w2`.
fn exact_tail(ranks: &[u32], n: usize, w2: u32, alternative: Alternative) -> f64 {
    let total: usize = ranks.iter().map(|&r| r as usize).sum();
    // counts[k][s]: subsets of size k with doubled sum s
    let mut counts = vec![vec![0f64; total + 1]; n + 1];
    counts[0][0] = 1.0;
    for &r in ranks {
        let r = r as usize;
        for k in (1..=n).rev() {
            let (lo, hi) = counts.split_at_mut(k);
            let prev = &lo[k - 1];
            let cur = &mut hi[0];
            for s in (r..=total).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    let dist = &counts[n];
    let all: f64 = dist.iter().sum();
    let w = w2 as usize;
    let tail: f64 = match alternative {
        Alternative::XGreater => dist[w..].iter().sum(),
        Alternative::XLess => dist[..=w].iter().sum(),
    };
    tail / all
}

fn normal_tail(n: usize, m: usize, w2: u32, ties: &[usize], alternative: Alternative) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let big_n = nf + mf;
    let u = w2 as f64 / 2.0 - nf * (nf + 1.0) / 2.0;
    let mean = nf * mf / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t as f64).powi(3) - t as f64).sum::<f64>() / (big_n * (big_n - 1.0));
    let var = nf * mf / 12.0 * ((big_n + 1.0) - tie_term);
    if var <= 0.0 {
        return 1.0;
    }
    let sd = var.sqrt();
    let z = match alternative {
        Alternative::XGreater => (u - mean - 0.5) / sd,
        Alternative::XLess => (mean - u - 0.5) / sd,
    };
    0.5 * libm::erfc(z / core::f64::consts::SQRT_2)
}

/// Hochberg step-up adjustment, returned in input order.
pub fn hochberg_adjust(p: &[f64]) -> Result<Vec<f64>, StatsError> {
    if let Some(&bad) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(StatsError::PValueOutOfRange(bad));
    }
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
    let mut out = vec![0.0; m];
    let mut running = 1.0f64;
    for (pos, &idx) in order.iter().enumerate().rev() {
        running = running.min((m - pos) as f64 * p[idx]).min(1.0);
        out[idx] = running;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_examples() {
        let p = mann_whitney_one_sided(&[1.0, 2.0], &[3.0, 4.0], Alternative::XLess).unwrap();
        assert!((p - 1.0 / 6.0).abs() < 1e-15);
        let q = mann_whitney_one_sided(&[3.0, 4.0], &[1.0, 2.0], Alternative::XGreater).unwrap();
        assert_eq!(p, q);
        assert!(mann_whitney_one_sided(&[5.0], &[5.0], Alternative::XGreater).unwrap() >= 0.5);
        assert!(mann_whitney_one_sided(&[], &[1.0], Alternative::XLess).is_err());
    }

    #[test]
    fn normal_branch_is_close_to_exact() {
        let x: Vec<f64> = (0..11).map(|i| i as f64 * 1.3).collect();
        let y: Vec<f64> = (0..11).map(|i| i as f64 * 1.1 + 3.0).collect();
        let approx = mann_whitney_one_sided(&x, &y, Alternative::XLess).unwrap();
        let (ranks, _) = doubled_midranks(&x, &y);
        let w2 = ranks[..11].iter().sum();
        let exact = exact_tail(&ranks, 11, w2, Alternative::XLess);
        assert!((approx - exact).abs() < 0.01, "{approx} vs {exact}");
    }

    #[test]
    fn hochberg_examples() {
        assert_eq!(hochberg_adjust(&[0.01, 0.03, 0.04]).unwrap(), [0.03, 0.04, 0.04]);
        assert_eq!(hochberg_adjust(&[0.2]).unwrap(), [0.2]);
        assert_eq!(hochberg_adjust(&[0.6, 0.9]).unwrap(), [0.9, 0.9]);
        assert!(hochberg_adjust(&[1.2]).is_err());
    }
}
