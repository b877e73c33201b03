//! Exact proximal operator of the separable cost-plus-constraint term
//! under a budget constraint.

use alloc::vec::Vec;
use num_traits::Float;

/// Per-coordinate nonsmooth term, already multiplied by the step size:
/// `kappa |x - anchor| + beta |x - anchor|^{3/2} + hold * max(-x, 0)`
/// restricted to `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ScalarTerm {
    pub anchor: f64,
    pub kappa: f64,
    pub beta: f64,
    pub hold: f64,
    pub lo: f64,
    pub hi: f64,
}

impl ScalarTerm {
    pub fn free(lo: f64, hi: f64) -> Self {
        Self {
            anchor: 0.0,
            kappa: 0.0,
            beta: 0.0,
            hold: 0.0,
            lo,
            hi,
        }
    }

    #[cfg(test)]
    pub fn value(&self, x: f64) -> f64 {
        let d = (x - self.anchor).abs();
        self.kappa * d + self.beta * d * d.sqrt() + self.hold * (-x).max(0.0)
    }

    /// One-sided derivatives of the cost part at `x`.
    fn slopes(&self, x: f64) -> (f64, f64) {
        let d = x - self.anchor;
        let (tl, tr) = if d == 0.0 {
            (-self.kappa, self.kappa)
        } else {
            let s = d.signum();
            let g = s * (self.kappa + 1.5 * self.beta * d.abs().sqrt());
            (g, g)
        };
        let hl = if x <= 0.0 { -self.hold } else { 0.0 };
        let hr = if x < 0.0 { -self.hold } else { 0.0 };
        (tl + hl, tr + hr)
    }

    /// `argmin_x 1/2 (x - a)^2 + cost(x)` over the box, with the derivative
    /// of the minimizer with respect to `a`.
    pub fn prox(&self, a: f64) -> (f64, f64) {
        let (x, dx) = self.prox_unboxed(a);
        if x <= self.lo {
            (self.lo, 0.0)
        } else if x >= self.hi {
            (self.hi, 0.0)
        } else {
            (x, dx)
        }
    }

    fn prox_unboxed(&self, a: f64) -> (f64, f64) {
        if self.kappa == 0.0 && self.beta == 0.0 && self.hold == 0.0 {
            return (a, 1.0);
        }
        let mut kinks = [self.anchor, 0.0];
        let nk = if self.hold > 0.0 && self.anchor != 0.0 {
            if kinks[1] < kinks[0] {
                kinks.swap(0, 1);
            }
            2
        } else {
            1
        };
        let kinks = &kinks[..nk];
        // psi(x) = x - a + cost'(x) is increasing; find where it crosses 0
        let mut region = 0;
        for &c in kinks {
            let (l, r) = self.slopes(c);
            if c - a + l <= 0.0 && c - a + r >= 0.0 {
                return (c, 0.0);
            }
            if c - a + r < 0.0 {
                region += 1;
            }
        }
        let lower = if region == 0 { f64::NEG_INFINITY } else { kinks[region - 1] };
        let upper = if region == nk { f64::INFINITY } else { kinks[region] };
        let s = if lower >= self.anchor { 1.0 } else { -1.0 };
        let neg = if upper <= 0.0 { self.hold } else { 0.0 };
        // y = |x - anchor| solves y + 1.5 beta sqrt(y) = s (a - s kappa + neg - anchor)
        let d = (s * (a - s * self.kappa + neg - self.anchor)).max(0.0);
        let (y, dy) = if self.beta == 0.0 {
            (d, 1.0)
        } else {
            let root = (2.25 * self.beta * self.beta + 4.0 * d).sqrt();
            let z = 0.5 * (root - 1.5 * self.beta);
            (z * z, if root > 0.0 { 2.0 * z / root } else { 0.0 })
        };
        let x = (self.anchor + s * y).clamp(lower, upper);
        (x, dy)
    }
}

/// Solves `min 1/2 |x - v|^2 + sum_i term_i(x_i)` subject to `sum x = 1`.
/// Returns the budget multiplier, which makes a good guess for the next call.
pub(crate) fn budget_prox(v: &[f64], terms: &[ScalarTerm], nu_guess: f64, out: &mut [f64]) -> f64 {
    let eval = |nu: f64, out: &mut [f64]| -> (f64, f64) {
        let mut s = 0.0;
        let mut ds = 0.0;
        for ((o, &vi), t) in out.iter_mut().zip(v).zip(terms) {
            let (x, dx) = t.prox(vi - nu);
            *o = x;
            s += x;
            ds += dx;
        }
        (s, ds)
    };
    let tol = 1e-14;
    let mut nu = if nu_guess.is_finite() { nu_guess } else { 0.0 };
    let (mut s, mut ds) = eval(nu, out);
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut step = 1e-3 + (s - 1.0).abs();
    for _ in 0..300 {
        let r = s - 1.0;
        if r.abs() <= tol {
            break;
        }
        // S(nu) is nonincreasing in nu
        if r > 0.0 {
            lo = nu;
        } else {
            hi = nu;
        }
        let mut next = if ds > 0.0 { nu + r / ds } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = match (lo.is_finite(), hi.is_finite()) {
                (true, true) => 0.5 * (lo + hi),
                (true, false) => {
                    step *= 2.0;
                    lo + step
                }
                (false, true) => {
                    step *= 2.0;
                    hi - step
                }
                (false, false) => unreachable!(),
            };
        }
        if lo.is_finite() && hi.is_finite() && hi - lo <= 1e-15 * (1.0 + nu.abs()) {
            break;
        }
        nu = next;
        (s, ds) = eval(nu, out);
    }
    nu
}

/// Reference minimizer by ternary search, used in tests.
#[cfg(test)]
pub(crate) fn scalar_prox_bruteforce(t: &ScalarTerm, a: f64) -> f64 {
    let f = |x: f64| 0.5 * (x - a) * (x - a) + t.value(x);
    let mut lo = t.lo.max(a - 10.0);
    let mut hi = t.hi.min(a + 10.0);
    for _ in 0..300 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
pub(crate) fn budget_prox_vec(v: &[f64], terms: &[ScalarTerm]) -> Vec<f64> {
    let mut out = alloc::vec![0.0; v.len()];
    budget_prox(v, terms, 0.0, &mut out);
    out
}
