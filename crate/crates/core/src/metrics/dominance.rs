use alloc::vec;
use alloc::vec::Vec;

use super::{MetricsError, ObjectivePoint};

/// Weak dominance with at least one strict improvement, in minimization form.
#[inline]
pub fn dominates_min(a: &[f64; 2], b: &[f64; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}

/// `a` dominates `b` in the (risk, -return) minimization form.
pub fn dominates(a: &ObjectivePoint, b: &ObjectivePoint) -> bool {
    dominates_min(&a.to_minimization(), &b.to_minimization())
}

/// Non-dominating rank of every point (0 = non-dominated set).
pub fn nondominated_sort(points: &[ObjectivePoint]) -> Result<Vec<usize>, MetricsError> {
    if points.is_empty() {
        return Err(MetricsError::Empty);
    }
    let min: Vec<[f64; 2]> = points.iter().map(ObjectivePoint::to_minimization).collect();
    Ok(rank_minimization(&min))
}

/// Bi-objective non-dominated sorting in O(n log n).
///
/// Points are swept in lexicographic order; each front keeps only its most
/// recently inserted member, which is the one with the smallest second
/// objective. A front dominates the incoming point iff that member does,
/// and "front k dominates p" is monotone in k, so the target front is found
/// by binary search.
pub fn rank_minimization(points: &[[f64; 2]]) -> Vec<usize> {
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        points[i][0]
            .total_cmp(&points[j][0])
            .then(points[i][1].total_cmp(&points[j][1]))
    });

    let mut ranks = vec![0usize; n];
    let mut tails: Vec<[f64; 2]> = Vec::new();
    for &i in &order {
        let p = &points[i];
        let (mut lo, mut hi) = (0usize, tails.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if dominates_min(&tails[mid], p) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == tails.len() {
            tails.push(*p);
        } else {
            tails[lo] = *p;
        }
        ranks[i] = lo;
    }
    ranks
}

/// Indices of the rank-0 points, in input order. Exact duplicates are all
/// reported.
pub fn pareto_indices(points: &[[f64; 2]]) -> Vec<usize> {
    rank_minimization(points)
        .into_iter()
        .enumerate()
        .filter_map(|(i, r)| (r == 0).then_some(i))
        .collect()
}

/// Crowding distance of every member of a single front.
///
/// Extremes in either objective get `+inf`; interior points accumulate the
/// normalized gap between their sorted neighbours (Manhattan form). An
/// objective with zero range adds nothing.
pub fn crowding_distance(front: &[ObjectivePoint]) -> Vec<f64> {
    let min: Vec<[f64; 2]> = front.iter().map(ObjectivePoint::to_minimization).collect();
    crowding_minimization(&min)
}

pub(crate) fn crowding_minimization(front: &[[f64; 2]]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut dist = vec![0.0f64; n];
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..2 {
        order.sort_by(|&i, &j| front[i][m].total_cmp(&front[j][m]).then(i.cmp(&j)));
        let lo = front[order[0]][m];
        let hi = front[order[n - 1]][m];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for k in 1..n - 1 {
            let gap = front[order[k + 1]][m] - front[order[k - 1]][m];
            dist[order[k]] += gap / range;
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(risk: f64, ret: f64) -> ObjectivePoint {
        ObjectivePoint::new(risk, ret).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&pt(1.0, 5.0), &pt(2.0, 3.0)));
        assert!(!dominates(&pt(1.0, 3.0), &pt(2.0, 5.0)));
        assert!(!dominates(&pt(1.0, 3.0), &pt(1.0, 3.0)));
    }

    #[test]
    fn sort_examples() {
        let pts = [pt(1.0, 5.0), pt(3.0, 6.0), pt(2.0, 3.0)];
        assert_eq!(nondominated_sort(&pts).unwrap(), vec![0, 0, 1]);
        assert_eq!(nondominated_sort(&[pt(4.0, 1.0)]).unwrap(), vec![0]);
        assert_eq!(nondominated_sort(&[pt(4.0, 1.0), pt(4.0, 1.0)]).unwrap(), vec![0, 0]);
        assert_eq!(nondominated_sort(&[]), Err(MetricsError::Empty));
    }

    #[test]
    fn duplicates_behind_a_dominator_share_rank() {
        let pts = [[0.0, 0.0], [1.0, 1.0], [1.0, 1.0], [2.0, 2.0]];
        assert_eq!(rank_minimization(&pts), vec![0, 1, 1, 2]);
    }

    #[test]
    fn crowding_examples() {
        let front: Vec<ObjectivePoint> = [[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]]
            .iter()
            .map(|v| ObjectivePoint::from_minimization(*v).unwrap())
            .collect();
        let d = crowding_distance(&front);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert!((d[1] - 2.0).abs() < 1e-12);
        assert!(crowding_distance(&front[..2]).iter().all(|d| d.is_infinite()));
        assert!(crowding_distance(&front[..1]).iter().all(|d| d.is_infinite()));
    }

    #[test]
    fn crowding_zero_range_objective() {
        let front = [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0], [1.0, 0.0]];
        let d = crowding_minimization(&front);
        assert_eq!(d[1], 0.0);
        assert_eq!(d[2], 0.0);
    }
}
