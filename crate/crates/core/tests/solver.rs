mod support;

use parden_core::portfolio::{
    solve_mpo, solve_spo, ConstraintSet, CostParams, PortfolioError, PortfolioState, TradeOffParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

#[test]
fn zero_cost_spo_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let inst = random_instance(&mut rng, n);
        let gamma = rng.random_range(1.0..50.0);
        let params = TradeOffParams::new(gamma, 0.0, 0.0).unwrap();
        let prev = random_state(&mut rng, n);
        let w = solve_spo(&prev, &inst.forecast, &params, &CostParams::zero(), &ConstraintSet::budget_only_without_cash())
            .unwrap();
        let oracle = markowitz_budget(&inst.sigma, &inst.mu, gamma);
        for (a, b) in w.weights()[..n].iter().zip(&oracle) {
            worst = worst.max((a - b).abs());
        }
        assert_eq!(w.cash(), 0.0);
    }
    assert!(worst <= 1e-6, "max weight error {worst}");
}

#[test]
fn single_period_mpo_is_spo() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let inst = random_instance(&mut rng, n);
        let params = TradeOffParams::new(rng.random_range(0.5..50.0), rng.random_range(0.0..20.0), rng.random_range(0.0..5.0)).unwrap();
        let prev = random_state(&mut rng, n);
        let c = ConstraintSet::default();
        let a = solve_spo(&prev, &inst.forecast, &params, &CostParams::default(), &c).unwrap();
        let b = solve_mpo(&prev, std::slice::from_ref(&inst.forecast), &params, &CostParams::default(), &c).unwrap();
        for (x, y) in a.weights().iter().zip(b[0].weights()) {
            assert!((x - y).abs() <= 1e-9);
        }
    }
}

#[test]
fn prohibitive_trading_cost_keeps_previous_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let n = rng.random_range(1..=6);
        let inst = random_instance(&mut rng, n);
        let prev = random_state(&mut rng, n);
        let params = TradeOffParams::new(1.0, 1e6, 0.0).unwrap();
        let w = solve_spo(&prev, &inst.forecast, &params, &CostParams::default(), &ConstraintSet::default()).unwrap();
        for (a, b) in w.weights().iter().zip(prev.weights()) {
            assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
        }
    }
}

#[test]
fn plans_are_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let n = rng.random_range(2..=6);
        let fs: Vec<_> = (0..3).map(|_| random_instance(&mut rng, n).forecast).collect();
        let params = TradeOffParams::new(rng.random_range(0.5..20.0), rng.random_range(0.0..5.0), 1.0).unwrap();
        let cons = ConstraintSet {
            max_weight: Some(0.4),
            ..ConstraintSet::default()
        };
        let plan = solve_mpo(&random_state(&mut rng, n), &fs, &params, &CostParams::default(), &cons).unwrap();
        assert_eq!(plan.len(), 3);
        for p in &plan {
            let w = p.weights();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(w[..n].iter().all(|x| *x >= -1e-9 && *x <= 0.4 + 1e-9));
        }
    }
}

#[test]
fn infeasible_box_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let inst = random_instance(&mut rng, 3);
    let cons = ConstraintSet {
        max_weight: Some(0.1),
        max_cash: Some(0.1),
        ..ConstraintSet::default()
    };
    let params = TradeOffParams::new(1.0, 0.0, 0.0).unwrap();
    let r = solve_spo(&PortfolioState::all_cash(3, 1e6), &inst.forecast, &params, &CostParams::zero(), &cons);
    assert!(matches!(r, Err(PortfolioError::Infeasible)));
}

// maximize mu.w - gamma/2 w'Sw over the simplex by a coarse grid refined
// around its best point
fn simplex_grid_oracle(sigma: &[Vec<f64>], mu: &[f64], gamma: f64) -> Vec<f64> {
    let n = mu.len();
    let obj = |w: &[f64]| {
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                q += w[i] * sigma[i][j] * w[j];
            }
        }
        mu.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() - 0.5 * gamma * q
    };
    let search = |center: &[f64], half: f64, steps: i64| {
        let mut best = (f64::NEG_INFINITY, center.to_vec());
        let h = half / steps as f64;
        let axes = n - 1;
        let mut idx = vec![-steps; axes];
        loop {
            let mut w: Vec<f64> = (0..axes).map(|k| center[k] + idx[k] as f64 * h).collect();
            let last = 1.0 - w.iter().sum::<f64>();
            w.push(last);
            if w.iter().all(|&x| x >= 0.0) {
                let v = obj(&w);
                if v > best.0 {
                    best = (v, w);
                }
            }
            let mut k = 0;
            while k < axes {
                idx[k] += 1;
                if idx[k] <= steps {
                    break;
                }
                idx[k] = -steps;
                k += 1;
            }
            if k == axes {
                return best.1;
            }
        }
    };
    let mut w = vec![1.0 / n as f64; n];
    let mut half = 1.0;
    while half > 1e-6 {
        w = search(&w, half, 40);
        half /= 10.0;
    }
    w
}

#[test]
fn large_risk_aversion_reaches_the_minimum_variance_corner() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cons = ConstraintSet {
        min_cash: Some(0.0),
        max_cash: Some(0.0),
        ..ConstraintSet::default()
    };
    for _ in 0..20 {
        let n = rng.random_range(2..=3);
        let inst = random_instance(&mut rng, n);
        let params = TradeOffParams::new(1e6, 0.0, 0.0).unwrap();
        let prev = random_state(&mut rng, n);
        let w = solve_spo(&prev, &inst.forecast, &params, &CostParams::zero(), &cons).unwrap();
        let oracle = simplex_grid_oracle(&inst.sigma, &inst.mu, 1e6);
        for (a, b) in w.weights()[..n].iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-4, "{:?} vs {oracle:?}", w.weights());
        }
    }
}
