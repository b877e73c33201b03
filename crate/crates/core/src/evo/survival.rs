use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use super::{EvoError, Individual};
use crate::metrics::{rank_minimization, ObjectivePoint};

fn objectives_of(merged: &[Individual]) -> Result<Vec<[f64; 2]>, EvoError> {
    merged
        .iter()
        .map(|i| {
            i.objectives
                .as_ref()
                .map(ObjectivePoint::to_minimization)
                .ok_or(EvoError::MissingObjectives)
        })
        .collect()
}

/// Fronts as index lists, best first.
fn fronts(objs: &[[f64; 2]]) -> Vec<Vec<usize>> {
    let ranks = rank_minimization(objs);
    let depth = ranks.iter().copied().max().map_or(0, |r| r + 1);
    let mut fronts = vec![Vec::new(); depth];
    for (i, r) in ranks.into_iter().enumerate() {
        fronts[r].push(i);
    }
    fronts
}

fn front_crowding(objs: &[[f64; 2]], front: &[usize]) -> Vec<f64> {
    let pts: Vec<[f64; 2]> = front.iter().map(|&i| objs[i]).collect();
    crate::metrics::dominance_crowding(&pts)
}

/// Generic front-wise survival: whole fronts while they fit, then
/// `split` chooses which members of the splitting front survive.
fn frontwise<F>(merged: Vec<Individual>, mu: usize, mut split: F) -> Result<Vec<Individual>, EvoError>
where
    F: FnMut(&[[f64; 2]], &[usize], &[f64], usize) -> Vec<usize>,
{
    let objs = objectives_of(&merged)?;
    let mut chosen: Vec<(usize, usize, f64)> = Vec::with_capacity(mu.min(merged.len()));
    for (rank, front) in fronts(&objs).iter().enumerate() {
        if chosen.len() >= mu {
            break;
        }
        let crowd = front_crowding(&objs, front);
        let slots = mu - chosen.len();
        if front.len() <= slots {
            chosen.extend(front.iter().zip(&crowd).map(|(&i, &c)| (i, rank, c)));
        } else {
            for k in split(&objs, front, &crowd, slots) {
                chosen.push((front[k], rank, crowd[k]));
            }
        }
    }
    let mut slots: Vec<Option<Individual>> = merged.into_iter().map(Some).collect();
    Ok(chosen
        .into_iter()
        .map(|(i, rank, crowding)| {
            let mut ind = slots[i].take().expect("survivor selected twice");
            ind.rank = Some(rank);
            ind.crowding = Some(crowding);
            ind
        })
        .collect())
}

/// NSGA-II survival: fronts in rank order; the splitting front keeps its
/// members with the largest crowding distance.
pub fn nsga2_survival(merged: Vec<Individual>, mu: usize) -> Result<Vec<Individual>, EvoError> {
    frontwise(merged, mu, |_, front, crowd, slots| {
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| crowd[b].total_cmp(&crowd[a]).then(a.cmp(&b)));
        order.truncate(slots);
        order
    })
}

/// Reference points at the two ends of the merged set's bounding box: the
/// lowest-risk/lowest-return corner and the highest-risk/highest-return
/// corner, i.e. `(0, 1)` and `(1, 0)` in normalized minimization form.
pub(crate) fn ideal_corners(merged: &[Individual]) -> Result<Vec<ObjectivePoint>, EvoError> {
    let objs = objectives_of(merged)?;
    let (lo, hi) = bounds(&objs);
    Ok(vec![
        ObjectivePoint::from_minimization([lo[0], hi[1]]).map_err(|_| EvoError::MissingObjectives)?,
        ObjectivePoint::from_minimization([hi[0], lo[1]]).map_err(|_| EvoError::MissingObjectives)?,
    ])
}

fn bounds(objs: &[[f64; 2]]) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in objs {
        for m in 0..2 {
            lo[m] = lo[m].min(p[m]);
            hi[m] = hi[m].max(p[m]);
        }
    }
    (lo, hi)
}

/// R-NSGA-II survival.
///
/// Within the splitting front, members are ordered per reference point by
/// normalized Euclidean distance (min-max over `merged`). Reference points
/// take turns picking their closest remaining member; each pick clears
/// every unpicked member within `epsilon` of it. Cleared members are only
/// used, in order of their best per-reference rank, once no uncleared
/// member is left.
pub fn rnsga2_survival(
    merged: Vec<Individual>,
    ref_points: &[ObjectivePoint],
    epsilon: f64,
    mu: usize,
) -> Result<Vec<Individual>, EvoError> {
    if ref_points.is_empty() {
        return Err(EvoError::NoReferencePoints);
    }
    if !(epsilon > 0.0) {
        return Err(EvoError::InvalidEpsilon(epsilon));
    }
    let objs = objectives_of(&merged)?;
    let (lo, hi) = bounds(&objs);
    let scale = [range(lo[0], hi[0]), range(lo[1], hi[1])];
    let norm = |p: [f64; 2]| [(p[0] - lo[0]) / scale[0], (p[1] - lo[1]) / scale[1]];
    let refs: Vec<[f64; 2]> = ref_points.iter().map(|r| norm(r.to_minimization())).collect();

    frontwise(merged, mu, |objs, front, _, slots| {
        let pts: Vec<[f64; 2]> = front.iter().map(|&i| norm(objs[i])).collect();
        let n = pts.len();
        // per reference point: members sorted by distance
        let orders: Vec<Vec<usize>> = refs
            .iter()
            .map(|r| {
                let mut o: Vec<usize> = (0..n).collect();
                o.sort_by(|&a, &b| dist(&pts[a], r).total_cmp(&dist(&pts[b], r)).then(a.cmp(&b)));
                o
            })
            .collect();
        let mut best_rank = vec![usize::MAX; n];
        for o in &orders {
            for (pos, &k) in o.iter().enumerate() {
                best_rank[k] = best_rank[k].min(pos);
            }
        }

        let mut picked = vec![false; n];
        let mut cleared = vec![false; n];
        let mut out = Vec::with_capacity(slots);
        'rounds: while out.len() < slots {
            let mut progress = false;
            for o in &orders {
                if out.len() >= slots {
                    break 'rounds;
                }
                let Some(&k) = o.iter().find(|&&k| !picked[k] && !cleared[k]) else {
                    continue;
                };
                picked[k] = true;
                out.push(k);
                progress = true;
                for j in 0..n {
                    if !picked[j] && dist(&pts[j], &pts[k]) <= epsilon {
                        cleared[j] = true;
                    }
                }
            }
            if !progress {
                break;
            }
        }
        if out.len() < slots {
            let mut rest: Vec<usize> = (0..n).filter(|&k| !picked[k]).collect();
            rest.sort_by(|&a, &b| best_rank[a].cmp(&best_rank[b]).then(a.cmp(&b)));
            out.extend(rest.into_iter().take(slots - out.len()));
        }
        out
    })
}

fn range(lo: f64, hi: f64) -> f64 {
    let r = hi - lo;
    if r > 0.0 && r.is_finite() {
        r
    } else {
        1.0
    }
}

#[inline]
fn dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}
