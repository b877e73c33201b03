use alloc::vec::Vec;
use core::fmt;

use super::{pareto_indices, MetricsError};

/// Backtest outcome: annualized risk and return, both in percent.
///
/// Both components are finite by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectivePoint {
    risk_pct: f64,
    return_pct: f64,
}

impl ObjectivePoint {
    pub fn new(risk_pct: f64, return_pct: f64) -> Result<Self, MetricsError> {
        if !risk_pct.is_finite() || !return_pct.is_finite() {
            return Err(MetricsError::NonFinite(risk_pct, return_pct));
        }
        Ok(Self {
            risk_pct,
            return_pct,
        })
    }

    /// Unchecked constructor for literal constants.
    pub(crate) const fn const_new(risk_pct: f64, return_pct: f64) -> Self {
        Self {
            risk_pct,
            return_pct,
        }
    }

    /// Builds a point from a minimization vector `(f1, f2)`, i.e. risk `f1`
    /// and return `-f2`. Used to run generic bi-objective problems through
    /// the same machinery.
    pub fn from_minimization(v: [f64; 2]) -> Result<Self, MetricsError> {
        Self::new(v[0], -v[1])
    }

    pub fn risk_pct(&self) -> f64 {
        self.risk_pct
    }

    pub fn return_pct(&self) -> f64 {
        self.return_pct
    }

    /// `(risk, -return)`: smaller is better in both components.
    #[inline]
    pub fn to_minimization(&self) -> [f64; 2] {
        [self.risk_pct, -self.return_pct]
    }
}

impl fmt::Display for ObjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(risk {}%, return {}%)", self.risk_pct, self.return_pct)
    }
}

/// An ordered list of objective points, usually a Pareto front.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrontierSet {
    pub points: Vec<ObjectivePoint>,
}

impl FrontierSet {
    pub fn new(points: Vec<ObjectivePoint>) -> Self {
        Self { points }
    }

    /// Non-dominated, duplicate-free subset of `points`, sorted by ascending
    /// risk (then descending return).
    pub fn pareto_of(points: &[ObjectivePoint]) -> Self {
        let min: Vec<[f64; 2]> = points.iter().map(ObjectivePoint::to_minimization).collect();
        let mut front: Vec<ObjectivePoint> = pareto_indices(&min).into_iter().map(|i| points[i]).collect();
        front.sort_by(|a, b| {
            a.to_minimization()[0]
                .total_cmp(&b.to_minimization()[0])
                .then(a.to_minimization()[1].total_cmp(&b.to_minimization()[1]))
        });
        front.dedup();
        Self { points: front }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, ObjectivePoint> {
        self.points.iter()
    }
}

impl From<Vec<ObjectivePoint>> for FrontierSet {
    fn from(points: Vec<ObjectivePoint>) -> Self {
        Self { points }
    }
}
