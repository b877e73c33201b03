//! Slow, obviously-correct reference implementations used by the test
//! suites. Shared with the acceptance target of the bench crate.
#![allow(dead_code)]

/// `a` dominates `b` (minimization).
pub fn dominates(a: [f64; 2], b: [f64; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}

/// Front index of every point by repeated peeling of the non-dominated set.
pub fn nd_rank_oracle(points: &[[f64; 2]]) -> Vec<usize> {
    let n = points.len();
    let mut rank = vec![usize::MAX; n];
    let mut level = 0;
    while rank.contains(&usize::MAX) {
        let open: Vec<usize> = (0..n).filter(|&i| rank[i] == usize::MAX).collect();
        let front: Vec<usize> = open
            .iter()
            .copied()
            .filter(|&i| !open.iter().any(|&j| dominates(points[j], points[i])))
            .collect();
        for i in front {
            rank[i] = level;
        }
        level += 1;
    }
    rank
}

/// Area dominated by `points` and bounded by `reference` (minimization),
/// summed cell by cell over the grid of all distinct coordinates.
pub fn hv_oracle(points: &[[f64; 2]], reference: [f64; 2]) -> f64 {
    let inside: Vec<[f64; 2]> = points
        .iter()
        .copied()
        .filter(|p| p[0] < reference[0] && p[1] < reference[1])
        .collect();
    let mut xs: Vec<f64> = inside.iter().map(|p| p[0]).chain([reference[0]]).collect();
    let mut ys: Vec<f64> = inside.iter().map(|p| p[1]).chain([reference[1]]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let mut area = 0.0;
    for i in 0..xs.len() - 1 {
        for j in 0..ys.len() - 1 {
            // a cell is covered when some point lies at or below its lower corner
            if inside.iter().any(|p| p[0] <= xs[i] && p[1] <= ys[j]) {
                area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
            }
        }
    }
    area
}

/// Kendall tau-b by counting all pairs.
pub fn tau_b_oracle(x: &[usize], y: &[usize]) -> f64 {
    let n = x.len();
    let (mut conc, mut disc, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = (x[i] as i64 - x[j] as i64).signum();
            let dy = (y[i] as i64 - y[j] as i64).signum();
            if dx == 0 {
                tx += 1;
            }
            if dy == 0 {
                ty += 1;
            }
            if dx * dy > 0 {
                conc += 1;
            } else if dx * dy < 0 {
                disc += 1;
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as i64;
    let denom = (((n0 - tx) * (n0 - ty)) as f64).sqrt();
    if denom == 0.0 {
        return f64::NAN;
    }
    (conc - disc) as f64 / denom
}

/// Twice the Mann-Whitney U of `x` (pairs with `x > y`, ties count half).
pub fn doubled_u(x: &[f64], y: &[f64]) -> u64 {
    let mut u = 0;
    for a in x {
        for b in y {
            if a > b {
                u += 2;
            } else if a == b {
                u += 1;
            }
        }
    }
    u
}

/// One-sided permutation p-value by enumerating every split of the pooled
/// sample: `P(U >= u_obs)` when `x_greater`, else `P(U <= u_obs)`.
pub fn mann_whitney_enumeration(x: &[f64], y: &[f64], x_greater: bool) -> f64 {
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let (n, total) = (x.len(), pooled.len());
    let observed = doubled_u(x, y);
    let (mut hits, mut count) = (0u64, 0u64);
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (i, v) in pooled.iter().enumerate() {
            if mask >> i & 1 == 1 {
                a.push(*v);
            } else {
                b.push(*v);
            }
        }
        let u = doubled_u(&a, &b);
        count += 1;
        if (x_greater && u >= observed) || (!x_greater && u <= observed) {
            hits += 1;
        }
    }
    hits as f64 / count as f64
}

/// Hochberg step-up written as the textbook ladder: the adjusted value of
/// the i-th smallest p is the minimum of `(m - j + 1) p_(j)` over `j >= i`,
/// capped at one.
pub fn hochberg_oracle(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
    let mut out = vec![0.0; m];
    for (i, &oi) in order.iter().enumerate() {
        let mut best = 1.0f64;
        for (j, &oj) in order.iter().enumerate().skip(i) {
            best = best.min((m - j) as f64 * p[oj]);
        }
        out[oi] = best;
    }
    out
}

/// Unconstrained-sign Markowitz with a budget: solves
/// `[gamma S 1; 1' 0] [w; nu] = [mu; 1]` by Gaussian elimination with
/// partial pivoting.
pub fn markowitz_budget(sigma: &[Vec<f64>], mu: &[f64], gamma: f64) -> Vec<f64> {
    let n = mu.len();
    let mut a = vec![vec![0.0; n + 2]; n + 1];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = gamma * sigma[i][j];
        }
        a[i][n] = 1.0;
        a[n][i] = 1.0;
        a[i][n + 1] = mu[i];
    }
    a[n][n + 1] = 1.0;
    let m = n + 1;
    for c in 0..m {
        let piv = (c..m).max_by(|&r, &s| a[r][c].abs().total_cmp(&a[s][c].abs())).unwrap();
        a.swap(c, piv);
        for r in 0..m {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=m {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    (0..n).map(|i| a[i][m] / a[i][i]).collect()
}

/// ZDT1 in minimization form.
pub fn zdt1(x: &[f64]) -> [f64; 2] {
    let f1 = x[0];
    let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (x.len() - 1) as f64;
    [f1, g * (1.0 - (f1 / g).sqrt())]
}

/// `k` evenly spaced points of the ZDT1 Pareto front.
pub fn zdt1_front(k: usize) -> Vec<[f64; 2]> {
    (0..k)
        .map(|i| {
            let f1 = i as f64 / (k - 1) as f64;
            [f1, 1.0 - f1.sqrt()]
        })
        .collect()
}

use parden_core::evo::Candidate;
use parden_core::linalg::Matrix;
use parden_core::portfolio::{PeriodForecast, PortfolioState};
use parden_core::search::Reservoir;
use rand::Rng;

/// A random single-period problem on `n` assets plus cash.
pub struct Instance {
    pub sigma: Vec<Vec<f64>>,
    pub mu: Vec<f64>,
    pub forecast: PeriodForecast,
}

pub fn random_instance<R: Rng>(rng: &mut R, n: usize) -> Instance {
    let k = n + 3;
    let f: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..n).map(|_| rng.random_range(-0.02..0.02)).collect())
        .collect();
    let mut sigma = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            sigma[i][j] = f.iter().map(|r| r[i] * r[j]).sum::<f64>() / k as f64;
        }
        sigma[i][i] += 1e-4;
    }
    let mu: Vec<f64> = (0..n).map(|_| rng.random_range(-0.002..0.004)).collect();
    let mut s = Matrix::zeros(n + 1);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = sigma[i][j];
        }
    }
    let mut mu_c = mu.clone();
    mu_c.push(0.0);
    let vol = (0..n).map(|_| rng.random_range(0.005..0.03)).collect();
    let volume = (0..n).map(|_| rng.random_range(1e7..1e8)).collect();
    let forecast = PeriodForecast::new(mu_c, s, vol, volume).expect("valid forecast");
    Instance { sigma, mu, forecast }
}

/// A random long-only starting portfolio including cash.
pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> PortfolioState {
    let mut w: Vec<f64> = (0..=n).map(|_| rng.random_range(0.0..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    let total: f64 = w.iter().sum();
    w[n] += 1.0 - total;
    PortfolioState::new(w, 1e6).expect("budget holds")
}

/// Inclusion counts of items `0..n` over `streams` reservoirs of size `r`.
pub fn reservoir_counts(n: usize, r: usize, streams: u64) -> Vec<u64> {
    let mut counts = vec![0u64; n];
    for s in 0..streams {
        let mut res = Reservoir::new(r, s);
        for i in 0..n {
            res.update(Candidate::new(vec![i as f64 / n as f64]).unwrap());
        }
        for c in res.items() {
            counts[(c.genes()[0] * n as f64).round() as usize] += 1;
        }
    }
    counts
}

/// Chi-square statistic of uniform inclusion and its p-value. Each stream
/// includes a uniform `r`-subset, so the count vector has covariance
/// `N p (1 - p) n / (n - 1) (I - 11'/n)` with `p = r / n`; scaling by that
/// variance gives a chi-square with `n - 1` degrees of freedom.
pub fn inclusion_chi_square(counts: &[u64], r: usize, streams: u64) -> (f64, f64) {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let n = counts.len() as f64;
    let p = r as f64 / n;
    let expected = streams as f64 * p;
    let var = streams as f64 * p * (1.0 - p) * n / (n - 1.0);
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / var).sum();
    let pval = 1.0 - ChiSquared::new(n - 1.0).unwrap().cdf(stat);
    (stat, pval)
}
