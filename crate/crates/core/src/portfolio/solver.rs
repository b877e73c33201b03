use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use super::costs::impact_scale;
use super::prox::{budget_prox, ScalarTerm};
use super::{
    phi_hold, phi_trade, ConstraintSet, CostParams, PeriodForecast, PortfolioError, PortfolioState,
    TradeOffParams,
};

/// Stopping rules shared by both solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Threshold on the fixed-point residual of the iteration, measured in
    /// weight units (the prox-gradient mapping times the step size).
    pub tolerance: f64,
    /// Stop when the objective moves less than this over `objective_window` iterations.
    pub objective_tolerance: f64,
    pub objective_window: usize,
    /// The objective rule only applies once the residual is below this.
    pub objective_gate: f64,
    pub max_iterations: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            objective_tolerance: 1e-10,
            objective_window: 50,
            objective_gate: 1e-6,
            max_iterations: 100_000,
        }
    }
}

/// Primal and dual iterates carried between consecutive solves.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WarmStart {
    plan: Vec<Vec<f64>>,
    duals: Vec<Vec<f64>>,
}

impl WarmStart {
    /// Drops the first period and repeats the last, for the next day's solve.
    pub fn shifted(&self) -> Self {
        fn shift(v: &[Vec<f64>]) -> Vec<Vec<f64>> {
            let mut out: Vec<Vec<f64>> = v.iter().skip(1).cloned().collect();
            if let Some(last) = v.last() {
                out.push(last.clone());
            }
            out
        }
        Self {
            plan: shift(&self.plan),
            duals: shift(&self.duals),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpoSolution {
    pub plan: Vec<PortfolioState>,
    /// Maximization-form objective of `plan`.
    pub objective: f64,
    pub iterations: usize,
    pub residual: f64,
    pub warm: WarmStart,
}

/// Single-period optimization: the multi-period problem with one period.
pub fn solve_spo(
    w_prev: &PortfolioState,
    forecast: &PeriodForecast,
    params: &TradeOffParams,
    costs: &CostParams,
    constraints: &ConstraintSet,
) -> Result<PortfolioState, PortfolioError> {
    let mut plan = solve_mpo(w_prev, core::slice::from_ref(forecast), params, costs, constraints)?;
    Ok(plan.remove(0))
}

/// Multi-period optimization over `forecasts.len()` periods.
pub fn solve_mpo(
    w_prev: &PortfolioState,
    forecasts: &[PeriodForecast],
    params: &TradeOffParams,
    costs: &CostParams,
    constraints: &ConstraintSet,
) -> Result<Vec<PortfolioState>, PortfolioError> {
    solve_mpo_with(w_prev, forecasts, params, costs, constraints, &SolverSettings::default(), None)
        .map(|s| s.plan)
}

/// Maximization-form objective of a plan (one weight vector per period).
pub fn objective_value(
    w_prev: &PortfolioState,
    forecasts: &[PeriodForecast],
    params: &TradeOffParams,
    costs: &CostParams,
    plan: &[&[f64]],
) -> Result<f64, PortfolioError> {
    let mut total = 0.0;
    let mut prev = w_prev.weights();
    for (f, w) in forecasts.iter().zip(plan) {
        let u: Vec<f64> = w.iter().zip(prev).map(|(a, b)| a - b).collect();
        let trade = phi_trade(&u, f.day_vol(), f.volume(), w_prev.portfolio_value, costs)?;
        total += crate::linalg::dot(f.mu(), w) - 0.5 * params.gamma_risk * f.sigma().quad_form(w)
            - params.gamma_trade * trade
            - params.gamma_hold * phi_hold(w, costs);
        prev = w;
    }
    Ok(total)
}

pub fn solve_mpo_with(
    w_prev: &PortfolioState,
    forecasts: &[PeriodForecast],
    params: &TradeOffParams,
    costs: &CostParams,
    constraints: &ConstraintSet,
    settings: &SolverSettings,
    warm: Option<&WarmStart>,
) -> Result<MpoSolution, PortfolioError> {
    params.validate()?;
    costs.validate()?;
    if forecasts.is_empty() {
        return Err(PortfolioError::EmptyHorizon);
    }
    let m = w_prev.weights().len();
    for f in forecasts {
        if f.mu().len() != m {
            return Err(PortfolioError::DimensionMismatch {
                what: "forecast",
                expected: m,
                got: f.mu().len(),
            });
        }
    }
    constraints.check_feasible(m - 1)?;
    let problem = Problem::new(w_prev, forecasts, params, costs, constraints);
    let warm = warm.filter(|w| w.plan.len() == forecasts.len() && w.plan.iter().all(|p| p.len() == m));
    let run = if forecasts.len() == 1 {
        problem.fista(settings, warm)
    } else {
        problem.primal_dual(settings, warm)
    };
    let to_states = |plan: &[Vec<f64>]| -> Vec<PortfolioState> {
        plan.iter()
            .map(|w| PortfolioState {
                weights: w.clone(),
                portfolio_value: w_prev.portfolio_value,
            })
            .collect()
    };
    if !run.converged {
        return Err(PortfolioError::NonConvergence {
            iterations: run.iterations,
            residual: run.residual,
            best: to_states(&run.plan),
        });
    }
    let objective = -problem.objective(&run.plan);
    Ok(MpoSolution {
        plan: to_states(&run.plan),
        objective,
        iterations: run.iterations,
        residual: run.residual,
        warm: WarmStart {
            plan: run.plan,
            duals: run.duals,
        },
    })
}

/// Initial dual-to-primal step ratio, relative to the Lipschitz constant.
const INITIAL_DUAL_RATIO: f64 = 1.0;

struct Run {
    plan: Vec<Vec<f64>>,
    duals: Vec<Vec<f64>>,
    iterations: usize,
    residual: f64,
    converged: bool,
}

/// Minimization form: sum over periods of `-mu'w + gamma/2 w'Sigma w + costs`.
struct Problem<'a> {
    prev: &'a [f64],
    forecasts: &'a [PeriodForecast],
    gamma: f64,
    /// `gamma_trade * half_spread`
    kappa: f64,
    /// `gamma_trade * impact scale`, per period and asset
    beta: Vec<Vec<f64>>,
    /// `gamma_hold * borrow`
    hold: f64,
    bounds: Vec<(f64, f64)>,
    lipschitz: f64,
}

impl<'a> Problem<'a> {
    fn new(
        w_prev: &'a PortfolioState,
        forecasts: &'a [PeriodForecast],
        params: &TradeOffParams,
        costs: &CostParams,
        constraints: &ConstraintSet,
    ) -> Self {
        let n = w_prev.n_assets();
        let beta = forecasts
            .iter()
            .map(|f| {
                (0..n)
                    .map(|i| params.gamma_trade * impact_scale(f.day_vol()[i], f.volume()[i], w_prev.portfolio_value, costs))
                    .collect()
            })
            .collect();
        let lmax = forecasts.iter().map(|f| f.max_eigenvalue()).fold(0.0, f64::max);
        Self {
            prev: w_prev.weights(),
            forecasts,
            gamma: params.gamma_risk,
            kappa: params.gamma_trade * costs.half_spread,
            beta,
            hold: params.gamma_hold * costs.borrow_cost,
            bounds: constraints.bounds(n),
            lipschitz: (params.gamma_risk * lmax).max(1e-6),
        }
    }

    fn n(&self) -> usize {
        self.prev.len() - 1
    }

    /// Separable terms of period `tau` scaled by `step`; the first period
    /// also carries the trade away from the current holdings.
    fn period_terms(&self, tau: usize, step: f64) -> Vec<ScalarTerm> {
        let n = self.n();
        self.bounds
            .iter()
            .enumerate()
            .map(|(i, &(lo, hi))| {
                if i == n {
                    return ScalarTerm::free(lo, hi);
                }
                let (anchor, kappa, beta) = if tau == 0 {
                    (self.prev[i], step * self.kappa, step * self.beta[0][i])
                } else {
                    (0.0, 0.0, 0.0)
                };
                ScalarTerm {
                    anchor,
                    kappa,
                    beta,
                    hold: step * self.hold,
                    lo,
                    hi,
                }
            })
            .collect()
    }

    fn gradient(&self, tau: usize, w: &[f64], out: &mut [f64]) {
        let f = &self.forecasts[tau];
        f.sigma().mul_vec_into(w, out);
        for (o, mu) in out.iter_mut().zip(f.mu()) {
            *o = self.gamma * *o - mu;
        }
    }

    fn objective(&self, plan: &[Vec<f64>]) -> f64 {
        let n = self.n();
        let mut total = 0.0;
        let mut prev = self.prev;
        for (tau, (f, w)) in self.forecasts.iter().zip(plan).enumerate() {
            total += -crate::linalg::dot(f.mu(), w) + 0.5 * self.gamma * f.sigma().quad_form(w);
            for i in 0..n {
                let d = (w[i] - prev[i]).abs();
                total += self.kappa * d + self.beta[tau][i] * d * d.sqrt() + self.hold * (-w[i]).max(0.0);
            }
            prev = w;
        }
        total
    }

    fn start(&self, warm: Option<&WarmStart>) -> Vec<Vec<f64>> {
        let h = self.forecasts.len();
        match warm {
            Some(w) => w.plan.clone(),
            None => vec![self.prev.to_vec(); h],
        }
    }

    /// Accelerated proximal gradient with adaptive restart (one period).
    fn fista(&self, settings: &SolverSettings, warm: Option<&WarmStart>) -> Run {
        let m = self.prev.len();
        let step = 1.0 / self.lipschitz;
        let terms = self.period_terms(0, step);
        let mut x = vec![0.0; m];
        let mut nu = budget_prox(&self.start(warm)[0], &terms, 0.0, &mut x);
        let mut y = x.clone();
        let mut x_new = vec![0.0; m];
        let mut grad = vec![0.0; m];
        let mut v = vec![0.0; m];
        let mut theta = 1.0;
        let mut last_obj = self.objective(core::slice::from_ref(&x));
        let mut residual = f64::INFINITY;
        for k in 1..=settings.max_iterations {
            self.gradient(0, &y, &mut grad);
            for i in 0..m {
                v[i] = y[i] - step * grad[i];
            }
            nu = budget_prox(&v, &terms, nu, &mut x_new);
            let mut r2 = 0.0;
            let mut restart = 0.0;
            for i in 0..m {
                let d = x_new[i] - y[i];
                r2 += d * d;
                restart += (y[i] - x_new[i]) * (x_new[i] - x[i]);
            }
            residual = r2.sqrt();
            let mut done = residual <= settings.tolerance;
            if restart > 0.0 {
                theta = 1.0;
            }
            let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
            let momentum = (theta - 1.0) / theta_next;
            theta = theta_next;
            for i in 0..m {
                y[i] = x_new[i] + momentum * (x_new[i] - x[i]);
            }
            core::mem::swap(&mut x, &mut x_new);
            if !done && k % settings.objective_window == 0 {
                let gated = residual <= settings.objective_gate;
                let obj = self.objective(core::slice::from_ref(&x));
                done = gated && (obj - last_obj).abs() <= settings.objective_tolerance;
                last_obj = obj;
            }
            if done {
                return Run {
                    plan: vec![x],
                    duals: Vec::new(),
                    iterations: k,
                    residual,
                    converged: true,
                };
            }
        }
        Run {
            plan: vec![x],
            duals: Vec::new(),
            iterations: settings.max_iterations,
            residual,
            converged: false,
        }
    }

    /// Condat-Vu primal-dual splitting: the trades between consecutive
    /// planned periods are handled through their dual variables. The ratio
    /// of dual to primal step adapts to balance the two residuals.
    fn primal_dual(&self, settings: &SolverSettings, warm: Option<&WarmStart>) -> Run {
        let h = self.forecasts.len();
        let m = self.prev.len();
        let n = self.n();
        let lip = self.lipschitz;
        let mut ratio = INITIAL_DUAL_RATIO;
        let mut adapt = 0.5;
        // |D|^2 < 4 for the difference operator
        let steps = |ratio: f64| {
            let sigma = lip * ratio;
            (0.99 / (0.5 * lip + 4.0 * sigma), sigma)
        };
        let (mut step, mut sigma) = steps(ratio);
        let mut terms: Vec<Vec<ScalarTerm>> = (0..h).map(|t| self.period_terms(t, step)).collect();
        let mut x = self.start(warm);
        let mut nus = vec![0.0; h];
        let mut tmp = vec![0.0; m];
        for t in 0..h {
            tmp.copy_from_slice(&x[t]);
            nus[t] = budget_prox(&tmp, &terms[t], 0.0, &mut x[t]);
        }
        // y[t-1] is the dual of x[t] - x[t-1], t = 1..h
        let mut y: Vec<Vec<f64>> = match warm {
            Some(w) if w.duals.len() == h - 1 && w.duals.iter().all(|d| d.len() == n) => w.duals.clone(),
            _ => vec![vec![0.0; n]; h - 1],
        };
        let mut x_new = x.clone();
        let mut y_new = y.clone();
        let mut grad = vec![0.0; m];
        let mut v = vec![0.0; m];
        let mut last_obj = self.objective(&x);
        let mut residual = f64::INFINITY;
        // D'y restricted to period t, asset i
        let dty = |y: &[Vec<f64>], t: usize, i: usize| -> f64 {
            let mut s = 0.0;
            if t >= 1 {
                s += y[t - 1][i];
            }
            if t + 1 < h {
                s -= y[t][i];
            }
            s
        };
        for k in 1..=settings.max_iterations {
            for t in 0..h {
                self.gradient(t, &x[t], &mut grad);
                for i in 0..m {
                    let d = if i < n { dty(&y, t, i) } else { 0.0 };
                    v[i] = x[t][i] - step * (grad[i] + d);
                }
                nus[t] = budget_prox(&v, &terms[t], nus[t], &mut x_new[t]);
            }
            for t in 1..h {
                for i in 0..n {
                    let bar = 2.0 * (x_new[t][i] - x_new[t - 1][i]) - (x[t][i] - x[t - 1][i]);
                    let z = y[t - 1][i] + sigma * bar;
                    // Moreau: prox of the conjugate from prox of h / sigma
                    let c = z / sigma;
                    let dz = (c.abs() - self.kappa / sigma).max(0.0);
                    let p = if dz == 0.0 {
                        0.0
                    } else {
                        let b = self.beta[t][i] / sigma;
                        let root = (2.25 * b * b + 4.0 * dz).sqrt();
                        let r = 0.5 * (root - 1.5 * b);
                        c.signum() * r * r
                    };
                    y_new[t - 1][i] = z - sigma * p;
                }
            }
            let mut primal = 0.0;
            for t in 0..h {
                for i in 0..m {
                    let dx = x[t][i] - x_new[t][i];
                    let dd = if i < n { dty(&y, t, i) - dty(&y_new, t, i) } else { 0.0 };
                    let p = dx - step * dd;
                    primal += p * p;
                }
            }
            let mut dual = 0.0;
            for t in 1..h {
                for i in 0..n {
                    let dy = y[t - 1][i] - y_new[t - 1][i];
                    let ddx = (x[t][i] - x_new[t][i]) - (x[t - 1][i] - x_new[t - 1][i]);
                    let d = step * (dy / sigma - ddx);
                    dual += d * d;
                }
            }
            let (primal, dual) = (primal.sqrt(), dual.sqrt());
            residual = (primal * primal + dual * dual).sqrt();
            core::mem::swap(&mut x, &mut x_new);
            core::mem::swap(&mut y, &mut y_new);
            let mut done = residual <= settings.tolerance;
            if !done && k % settings.objective_window == 0 {
                let gated = residual <= settings.objective_gate;
                let obj = self.objective(&x);
                done = gated && (obj - last_obj).abs() <= settings.objective_tolerance;
                last_obj = obj;
            }
            if done {
                return Run {
                    plan: x,
                    duals: y,
                    iterations: k,
                    residual,
                    converged: true,
                };
            }
            if adapt > 1e-3 && k % 10 == 0 {
                let mut changed = false;
                if primal > 2.0 * dual {
                    ratio *= 1.0 - adapt;
                    changed = true;
                } else if dual > 2.0 * primal {
                    ratio /= 1.0 - adapt;
                    changed = true;
                }
                if changed {
                    adapt *= 0.95;
                    (step, sigma) = steps(ratio);
                    terms = (0..h).map(|t| self.period_terms(t, step)).collect();
                }
            }
        }
        Run {
            plan: x,
            duals: y,
            iterations: settings.max_iterations,
            residual,
            converged: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{solve_dense, Matrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random covariance with a zero cash row/column.
    fn random_forecast(rng: &mut ChaCha8Rng, n: usize) -> PeriodForecast {
        let k = n + 2;
        let f: Vec<Vec<f64>> = (0..k).map(|_| (0..n).map(|_| rng.random_range(-0.02..0.02)).collect()).collect();
        let mut s = Matrix::zeros(n + 1);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] = f.iter().map(|r| r[i] * r[j]).sum::<f64>() / k as f64;
            }
            s[(i, i)] += 1e-4;
        }
        let mu = (0..=n).map(|i| if i == n { 0.0 } else { rng.random_range(-0.002..0.004) }).collect();
        let vol = (0..n).map(|_| rng.random_range(0.005..0.03)).collect();
        let volume = (0..n).map(|_| rng.random_range(1e7..1e8)).collect();
        PeriodForecast::new(mu, s, vol, volume).unwrap()
    }

    fn equal_weight(n: usize) -> PortfolioState {
        let mut w = vec![1.0 / n as f64; n];
        w.push(0.0);
        PortfolioState::new(w, 1e6).unwrap()
    }

    #[test]
    fn budget_only_matches_kkt_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 5;
        let f = random_forecast(&mut rng, n);
        let gamma = 5.0;
        let params = TradeOffParams::new(gamma, 0.0, 0.0).unwrap();
        let w = solve_spo(&equal_weight(n), &f, &params, &CostParams::zero(), &ConstraintSet::budget_only_without_cash()).unwrap();
        // [gamma S 1; 1' 0][w; nu] = [mu; 1]
        let mut a = Matrix::zeros(n + 1);
        let mut b = vec![0.0; n + 1];
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = gamma * f.sigma()[(i, j)];
            }
            a[(i, n)] = 1.0;
            a[(n, i)] = 1.0;
            b[i] = f.mu()[i];
        }
        b[n] = 1.0;
        let sol = solve_dense(&a, &b).unwrap();
        for i in 0..n {
            assert!((w.weights()[i] - sol[i]).abs() < 1e-6, "{i}: {} vs {}", w.weights()[i], sol[i]);
        }
        assert_eq!(w.cash(), 0.0);
    }

    #[test]
    fn mpo_single_period_equals_spo() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_forecast(&mut rng, 6);
        let params = TradeOffParams::new(10.0, 5.0, 1.0).unwrap();
        let c = ConstraintSet::default();
        let prev = equal_weight(6);
        let a = solve_spo(&prev, &f, &params, &CostParams::default(), &c).unwrap();
        let b = solve_mpo(&prev, core::slice::from_ref(&f), &params, &CostParams::default(), &c).unwrap();
        assert_eq!(a, b[0]);
    }

    #[test]
    fn huge_trading_cost_freezes_holdings() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_forecast(&mut rng, 4);
        let prev = PortfolioState::new(vec![0.3, 0.2, 0.1, 0.15, 0.25], 1e6).unwrap();
        let params = TradeOffParams::new(1.0, 1e6, 1.0).unwrap();
        let w = solve_spo(&prev, &f, &params, &CostParams::default(), &ConstraintSet::default()).unwrap();
        for (a, b) in w.weights().iter().zip(prev.weights()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_trading_cost_decouples_periods() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let fs = [random_forecast(&mut rng, 4), random_forecast(&mut rng, 4), random_forecast(&mut rng, 4)];
        let params = TradeOffParams::new(20.0, 0.0, 1.0).unwrap();
        let costs = CostParams::default();
        let c = ConstraintSet::default();
        let prev = equal_weight(4);
        let plan = solve_mpo(&prev, &fs, &params, &costs, &c).unwrap();
        let refs: Vec<&[f64]> = plan.iter().map(|p| p.weights()).collect();
        let joint = objective_value(&prev, &fs, &params, &costs, &refs).unwrap();
        let mut separate = 0.0;
        for (f, w) in fs.iter().zip(&plan) {
            let single = solve_spo(&prev, f, &params, &costs, &c).unwrap();
            separate += objective_value(&prev, core::slice::from_ref(f), &params, &costs, &[single.weights()]).unwrap();
            for (a, b) in w.weights().iter().zip(single.weights()) {
                assert!((a - b).abs() < 1e-3, "{a} vs {b}");
            }
        }
        assert!((joint - separate).abs() < 1e-9, "{joint} vs {separate}");
    }

    #[test]
    fn solution_beats_feasible_alternatives() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 5;
        let fs = [random_forecast(&mut rng, n), random_forecast(&mut rng, n)];
        let params = TradeOffParams::new(3.0, 4.0, 2.0).unwrap();
        let costs = CostParams::default();
        let prev = equal_weight(n);
        let plan = solve_mpo(&prev, &fs, &params, &costs, &ConstraintSet::default()).unwrap();
        let refs: Vec<&[f64]> = plan.iter().map(|p| p.weights()).collect();
        let best = objective_value(&prev, &fs, &params, &costs, &refs).unwrap();
        for _ in 0..500 {
            let mut alt: Vec<Vec<f64>> = Vec::new();
            for p in &plan {
                let mut w: Vec<f64> = p.weights().iter().map(|x| (x + rng.random_range(-0.05..0.05)).max(0.0)).collect();
                let s: f64 = w.iter().sum();
                w.iter_mut().for_each(|x| *x /= s);
                alt.push(w);
            }
            let refs: Vec<&[f64]> = alt.iter().map(|p| p.as_slice()).collect();
            assert!(objective_value(&prev, &fs, &params, &costs, &refs).unwrap() <= best + 1e-9);
        }
    }

    #[test]
    fn infeasible_constraints_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_forecast(&mut rng, 3);
        let c = ConstraintSet {
            long_only: true,
            max_weight: Some(0.2),
            min_cash: None,
            max_cash: Some(0.1),
        };
        let params = TradeOffParams::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            solve_spo(&equal_weight(3), &f, &params, &CostParams::default(), &c),
            Err(PortfolioError::Infeasible)
        );
    }
}
