use num_traits::Float;
use alloc::vec::Vec;

use super::SurrogateError;

/// Kendall rank correlation with tie correction (tau-b), in O(n log n).
///
/// `tau_b = (C - D) / sqrt((n0 - n1)(n0 - n2))` where `n1`/`n2` count pairs
/// tied in the first/second vector. Discordant pairs are counted as the
/// number of inversions left after sorting by the first vector (ties broken
/// by the second), via merge sort.
pub fn kendall_tau_b(r: &[usize], r_hat: &[usize]) -> Result<f64, SurrogateError> {
    let n = r.len();
    if n != r_hat.len() || n < 2 {
        return Err(SurrogateError::BadRankLength(n, r_hat.len()));
    }
    let mut pairs: Vec<(usize, usize)> = r.iter().copied().zip(r_hat.iter().copied()).collect();
    pairs.sort_unstable();

    let pairs_of = |t: u64| t * t.saturating_sub(1) / 2;
    let n0 = pairs_of(n as u64);
    let (mut tied_x, mut tied_xy) = (0u64, 0u64);
    let (mut run_x, mut run_xy) = (1u64, 1u64);
    for k in 1..n {
        if pairs[k].0 == pairs[k - 1].0 {
            run_x += 1;
            if pairs[k].1 == pairs[k - 1].1 {
                run_xy += 1;
            } else {
                tied_xy += pairs_of(run_xy);
                run_xy = 1;
            }
        } else {
            tied_x += pairs_of(run_x);
            tied_xy += pairs_of(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    tied_x += pairs_of(run_x);
    tied_xy += pairs_of(run_xy);

    let mut ys: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let mut buf = ys.clone();
    let swaps = merge_count(&mut ys, &mut buf);

    let mut tied_y = 0u64;
    let mut run_y = 1u64;
    for k in 1..n {
        if ys[k] == ys[k - 1] {
            run_y += 1;
        } else {
            tied_y += pairs_of(run_y);
            run_y = 1;
        }
    }
    tied_y += pairs_of(run_y);

    let dx = n0 - tied_x;
    let dy = n0 - tied_y;
    if dx == 0 || dy == 0 {
        return Err(SurrogateError::DegenerateRanks);
    }
    let numer = n0 as f64 - tied_x as f64 - tied_y as f64 + tied_xy as f64 - 2.0 * swaps as f64;
    let tau = numer / ((dx as f64) * (dy as f64)).sqrt();
    Ok(tau.clamp(-1.0, 1.0))
}

/// Sorts `v` ascending, returning the number of strict inversions.
fn merge_count(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (l, r) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(l, bl) + merge_count(r, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}
