use num_traits::Float;
use alloc::vec::Vec;

use super::{pareto_indices, MetricsError, ObjectivePoint};

/// Hypervolume reference point: risk 40%, return 0%.
pub const DEFAULT_HV_REFERENCE: ObjectivePoint = ObjectivePoint::const_new(40.0, 0.0);

/// Exact bi-objective hypervolume of `points` bounded by `reference`.
///
/// Points that are not strictly better than the reference in both
/// objectives contribute nothing.
pub fn hypervolume(points: &[ObjectivePoint], reference: &ObjectivePoint) -> f64 {
    let r = reference.to_minimization();
    let inside: Vec<[f64; 2]> = points
        .iter()
        .map(ObjectivePoint::to_minimization)
        .filter(|p| p[0] < r[0] && p[1] < r[1])
        .collect();
    let mut front: Vec<[f64; 2]> = pareto_indices(&inside).into_iter().map(|i| inside[i]).collect();
    front.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    front.dedup();
    // sorted by f1 ascending, f2 is strictly decreasing along the front
    let mut area = 0.0;
    for (k, p) in front.iter().enumerate() {
        let right = front.get(k + 1).map_or(r[0], |q| q[0]);
        area += (right - p[0]) * (r[1] - p[1]);
    }
    area
}

/// `d+(a, z) = sqrt(sum_i max(a_i - z_i, 0)^2)` in minimization form.
#[inline]
pub fn plus_distance(a: &[f64; 2], z: &[f64; 2]) -> f64 {
    let d0 = (a[0] - z[0]).max(0.0);
    let d1 = (a[1] - z[1]).max(0.0);
    (d0 * d0 + d1 * d1).sqrt()
}

/// Generational distance plus of `solutions` against the `target` front.
pub fn gd_plus(solutions: &[ObjectivePoint], target: &[ObjectivePoint]) -> Result<f64, MetricsError> {
    mean_min_plus_distance(solutions, target, plus_distance)
}

/// Inverted generational distance plus: for every target point, the
/// smallest `d+` from that point toward the solution set.
pub fn igd_plus(solutions: &[ObjectivePoint], target: &[ObjectivePoint]) -> Result<f64, MetricsError> {
    mean_min_plus_distance(target, solutions, |z, a| plus_distance(a, z))
}

fn mean_min_plus_distance(
    outer: &[ObjectivePoint],
    inner: &[ObjectivePoint],
    dist: impl Fn(&[f64; 2], &[f64; 2]) -> f64,
) -> Result<f64, MetricsError> {
    if outer.is_empty() || inner.is_empty() {
        return Err(MetricsError::Empty);
    }
    let inner: Vec<[f64; 2]> = inner.iter().map(ObjectivePoint::to_minimization).collect();
    let total: f64 = outer
        .iter()
        .map(|o| {
            let o = o.to_minimization();
            inner.iter().map(|i| dist(&o, i)).fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / outer.len() as f64)
}

pub(crate) fn igd_plus_minimization(solutions: &[[f64; 2]], target: &[[f64; 2]]) -> f64 {
    let total: f64 = target
        .iter()
        .map(|z| solutions.iter().map(|a| plus_distance(a, z)).fold(f64::INFINITY, f64::min))
        .sum();
    total / target.len() as f64
}
