//! Random rankings and channels with exact rational entries.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::channel::Channel;
use crate::order::{is_stable, TieRule};
use crate::ranking::Ranking;

pub fn random_ranking<R: Rng>(rng: &mut R, n: usize) -> Ranking {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Ranking::from_perm(perm).expect("shuffle yields a permutation")
}

/// Rows of integer weights in `0..=max_weight`, normalized to sum 1.
///
/// Small `max_weight` produces many ties; a row of zeros is redrawn.
pub fn random_channel<R: Rng>(rng: &mut R, n: usize, m: usize, max_weight: u32) -> Channel {
    let rows = (0..n)
        .map(|_| loop {
            let w: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=max_weight)).collect();
            let total: u32 = w.iter().sum();
            if total > 0 {
                break w
                    .into_iter()
                    .map(|x| BigRational::new(BigInt::from(x), BigInt::from(total)))
                    .collect();
            }
        })
        .collect();
    Channel::new(rows).expect("normalized rows are stochastic")
}

/// A channel whose every column is tie-free.
///
/// Panics when `n >= 2` and `m < 2`: a single stochastic column is constant.
pub fn random_stable_channel<R: Rng>(rng: &mut R, n: usize, m: usize) -> Channel {
    assert!(n < 2 || m >= 2, "no stable {n}x{m} channel exists");
    loop {
        let ch = random_channel(rng, n, m, 1000);
        if is_stable(&ch, &TieRule::Exact) {
            return ch;
        }
    }
}

/// `(1 - t) P + t U` with `U` the uniform `1/m` matrix: every column is
/// mapped by the same increasing affine map, so `O⁻` is unchanged.
pub fn same_cone_variant(p: &Channel, t: &BigRational) -> Channel {
    let m = BigRational::from_integer(p.m_outputs().into());
    let keep = BigRational::from_integer(1.into()) - t;
    let shift = t / m;
    let rows = p
        .rows()
        .iter()
        .map(|row| row.iter().map(|x| &keep * x + &shift).collect())
        .collect();
    Channel::new(rows).expect("convex combination of channels")
}

/// Moves probability mass inside one row, aiming to land on an existing
/// value of the receiving column so ties appear or disappear.
pub fn perturbed_variant<R: Rng>(rng: &mut R, p: &Channel) -> Channel {
    let (n, m) = p.dims();
    let mut rows = p.rows().to_vec();
    if m < 2 {
        return p.clone();
    }
    let i = rng.gen_range(0..n);
    let a = rng.gen_range(0..m);
    let b = (a + rng.gen_range(1..m)) % m;
    let k = rng.gen_range(0..n);
    let target = &rows[k][b] - &rows[i][b];
    let delta = if target > BigRational::from_integer(0.into()) && rows[i][a] >= target {
        target
    } else {
        &rows[i][a] / BigRational::from_integer(2.into())
    };
    rows[i][a] = &rows[i][a] - &delta;
    rows[i][b] = &rows[i][b] + &delta;
    Channel::new(rows).expect("mass shift keeps rows stochastic")
}
