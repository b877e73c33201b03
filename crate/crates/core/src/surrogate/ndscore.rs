use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{kendall_tau_b, Dataset, Surrogate, SurrogateError, SurrogateFamily};
use crate::metrics::rank_minimization;
use crate::ObjectivePoint;

/// Non-dominating ranks of a set of objective points.
pub fn ranks_of(points: &[ObjectivePoint]) -> Vec<usize> {
    let min: Vec<[f64; 2]> = points.iter().map(ObjectivePoint::to_minimization).collect();
    rank_minimization(&min)
}

/// Cross-validated non-dominated score in `[0, 1]`.
///
/// The rows are shuffled into `k` folds. For each fold a surrogate is fit
/// on the remaining rows, the fold is predicted, and the non-dominating
/// ranks of the true and predicted objectives (computed within the fold)
/// are compared with Kendall tau-b, mapped to `(tau + 1) / 2`. Folds where
/// tau-b is undefined are skipped; the score is the mean over the rest, or
/// 0.5 when every fold is degenerate. With `k = 1` the single fold is both
/// the training and the validation split.
pub fn nd_score<F, R>(family: &F, data: &Dataset, k: usize, rng: &mut R) -> Result<f64, SurrogateError>
where
    F: SurrogateFamily,
    R: Rng + ?Sized,
{
    if k == 0 {
        return Err(SurrogateError::BadFoldCount);
    }
    let n = data.len();
    if n < 2 * k {
        return Err(SurrogateError::TooFewRows(n, 2 * k));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);

    let mut total = 0.0;
    let mut valid = 0usize;
    for f in 0..k {
        let (lo, hi) = (f * n / k, (f + 1) * n / k);
        let val_idx = &perm[lo..hi];
        let train_idx: Vec<usize> = if k == 1 {
            perm.clone()
        } else {
            perm[..lo].iter().chain(&perm[hi..]).copied().collect()
        };
        let seed: u64 = rng.random();
        let model = family.fit(&data.subset(&train_idx), seed)?;
        let val = data.subset(val_idx);
        let predicted = model.predict(val.inputs())?;
        let r = ranks_of(val.targets());
        let r_hat = ranks_of(&predicted);
        match kendall_tau_b(&r, &r_hat) {
            Ok(tau) => {
                total += (tau + 1.0) / 2.0;
                valid += 1;
            }
            Err(SurrogateError::DegenerateRanks) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(if valid == 0 { 0.5 } else { total / valid as f64 })
}
