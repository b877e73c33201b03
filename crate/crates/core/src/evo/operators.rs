use num_traits::Float;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{Candidate, EvoError, Individual};

fn check_rate(rate: f64) -> Result<(), EvoError> {
    if (0.0..=1.0).contains(&rate) {
        Ok(())
    } else {
        Err(EvoError::InvalidRate(rate))
    }
}

/// Latin hypercube sample of `m` points in `[0, 1]^d`: every dimension has
/// exactly one value in each of the `m` equal-width strata.
pub fn lhs_init<R: Rng + ?Sized>(m: usize, d: usize, rng: &mut R) -> Vec<Candidate> {
    let mut genes = alloc::vec![alloc::vec![0.0; d]; m];
    let mut strata: Vec<usize> = (0..m).collect();
    for j in 0..d {
        strata.shuffle(rng);
        for (i, &s) in strata.iter().enumerate() {
            let u: f64 = rng.random();
            // (s + u) / m < 1 for u < 1, but guard the rounding anyway
            genes[i][j] = ((s as f64 + u) / m as f64).min(1.0);
        }
    }
    genes.into_iter().map(Candidate::clamped).collect()
}

/// Real uniform crossover. With probability `crossover_rate` each gene is
/// swapped between the two children with probability 1/2; otherwise the
/// children are copies of the parents.
pub fn uniform_crossover<R: Rng + ?Sized>(
    p1: &Candidate,
    p2: &Candidate,
    crossover_rate: f64,
    rng: &mut R,
) -> Result<(Candidate, Candidate), EvoError> {
    check_rate(crossover_rate)?;
    if p1.dim() != p2.dim() {
        return Err(EvoError::DimensionMismatch {
            expected: p1.dim(),
            got: p2.dim(),
        });
    }
    let mut a = p1.genes().to_vec();
    let mut b = p2.genes().to_vec();
    if rng.random::<f64>() < crossover_rate {
        for (x, y) in a.iter_mut().zip(b.iter_mut()) {
            if rng.random::<bool>() {
                core::mem::swap(x, y);
            }
        }
    }
    Ok((Candidate::clamped(a), Candidate::clamped(b)))
}

/// Bounded polynomial mutation on `[0, 1]`, applied gene-wise with
/// probability `mutation_rate`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    c: &Candidate,
    mutation_rate: f64,
    eta: f64,
    rng: &mut R,
) -> Result<Candidate, EvoError> {
    check_rate(mutation_rate)?;
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(EvoError::InvalidEta(eta));
    }
    let mut genes = c.genes().to_vec();
    let mut_pow = 1.0 / (eta + 1.0);
    for y in genes.iter_mut() {
        if rng.random::<f64>() >= mutation_rate {
            continue;
        }
        let delta1 = *y;
        let delta2 = 1.0 - *y;
        let r: f64 = rng.random();
        let deltaq = if r < 0.5 {
            let xy = 1.0 - delta1;
            let val = 2.0 * r + (1.0 - 2.0 * r) * xy.powf(eta + 1.0);
            val.powf(mut_pow) - 1.0
        } else {
            let xy = 1.0 - delta2;
            let val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * xy.powf(eta + 1.0);
            1.0 - val.powf(mut_pow)
        };
        *y += deltaq;
    }
    Ok(Candidate::clamped(genes))
}

/// Binary tournament on (rank ascending, crowding descending), remaining
/// ties broken by a coin flip.
pub fn tournament_select<'a, R: Rng + ?Sized>(
    pool: &'a [Individual],
    rng: &mut R,
) -> Result<&'a Individual, EvoError> {
    let n = pool.len();
    if n == 0 {
        return Err(EvoError::EmptyPool);
    }
    if n == 1 {
        key(&pool[0])?;
        return Ok(&pool[0]);
    }
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let (ri, ci) = key(&pool[i])?;
    let (rj, cj) = key(&pool[j])?;
    let pick_i = if ri != rj {
        ri < rj
    } else if ci != cj {
        ci > cj
    } else {
        rng.random::<bool>()
    };
    Ok(if pick_i { &pool[i] } else { &pool[j] })
}

fn key(ind: &Individual) -> Result<(usize, f64), EvoError> {
    match (ind.rank, ind.crowding) {
        (Some(r), Some(c)) => Ok((r, c)),
        _ => Err(EvoError::MissingRankOrCrowding),
    }
}
