//! Exact combinatorics on rankings.
//!
//! `S(σ)` counts the nonempty codes on which the identity ranking and `σ`
//! decode to the same codeword. It has the closed form
//! `S(σ) = Σ_i 2^{f_i(σ)}` with `f_i(σ) = #{ j > i : σ⁻¹(i) ≤ σ⁻¹(j) }`,
//! and `S(σ, φ) = S(φ⁻¹ ∘ σ)`. Counts are arbitrary width.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ranking::Ranking;

/// Number of nonempty codes on which two rankings decode identically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AgreementCount {
    #[serde(serialize_with = "ser_biguint")]
    pub value: BigUint,
    pub n: usize,
}

fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(v) {
        Ok(small) => s.serialize_u64(small),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

impl AgreementCount {
    /// `2^n - 1`, the number of nonempty codes.
    pub fn total_codes(n: usize) -> BigUint {
        (BigUint::one() << n) - BigUint::one()
    }

    pub fn probability(&self) -> BigRational {
        BigRational::new(self.value.clone().into(), Self::total_codes(self.n).into())
    }
}

/// `f_i(σ)` for a zero-based input `i`.
pub fn f(sigma: &Ranking, i: usize) -> Result<usize> {
    let n = sigma.len();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i + 1, max: n });
    }
    let inv = sigma.inv();
    Ok(inv[i + 1..].iter().filter(|&&r| inv[i] <= r).count())
}

fn f_values(sigma: &Ranking) -> Vec<usize> {
    let inv = sigma.inv();
    (0..inv.len())
        .map(|i| inv[i + 1..].iter().filter(|&&r| inv[i] <= r).count())
        .collect()
}

/// `S(σ) = Σ_i 2^{f_i(σ)}`.
pub fn s_single(sigma: &Ranking) -> AgreementCount {
    let value = f_values(sigma)
        .into_iter()
        .fold(BigUint::zero(), |acc, fi| acc + (BigUint::one() << fi));
    AgreementCount {
        value,
        n: sigma.len(),
    }
}

/// `S(σ, φ) = S(φ⁻¹ ∘ σ)`.
pub fn s_pair(sigma: &Ranking, phi: &Ranking) -> Result<AgreementCount> {
    Ok(s_single(&phi.inverse().compose(sigma)?))
}

/// Probability that a uniformly random nonempty code decodes identically.
pub fn agreement_probability(sigma: &Ranking, phi: &Ranking) -> Result<BigRational> {
    Ok(s_pair(sigma, phi)?.probability())
}

/// `d_dec(σ, φ) = 1 - S(φ⁻¹ ∘ σ) / (2^n - 1)`.
pub fn decoding_distance(sigma: &Ranking, phi: &Ranking) -> Result<BigRational> {
    Ok(BigRational::one() - agreement_probability(sigma, phi)?)
}

/// `S(τ_r ∘ σ) - S(σ)` for the adjacent transposition `τ_r = (r, r+1)`,
/// `r` zero-based.
///
/// Negative `2^{f_r(σ) - 1}` when `σ⁻¹(r) < σ⁻¹(r+1)`, otherwise positive
/// `2^{f_{r+1}(σ)}`.
pub fn transposition_delta(sigma: &Ranking, r: usize) -> Result<BigInt> {
    let n = sigma.len();
    if r + 1 >= n {
        return Err(Error::IndexOutOfRange {
            index: r + 1,
            max: n.saturating_sub(1),
        });
    }
    let inv = sigma.inv();
    Ok(if inv[r] < inv[r + 1] {
        -(BigInt::one() << (f(sigma, r)? - 1))
    } else {
        BigInt::one() << f(sigma, r + 1)?
    })
}

/// Number of inversions of `φ⁻¹ ∘ σ`: the minimum count of adjacent swaps
/// between the two rankings.
pub fn kendall_tau(sigma: &Ranking, phi: &Ranking) -> Result<u64> {
    let q = phi.inverse().compose(sigma)?;
    let mut v = q.perm().to_vec();
    let mut buf = vec![0; v.len()];
    Ok(count_inversions(&mut v, &mut buf))
}

fn count_inversions(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (left, right) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        count_inversions(left, bl) + count_inversions(right, br)
    };
    let (mut i, mut j) = (0, mid);
    for slot in buf.iter_mut().take(n) {
        if j >= n || (i < mid && v[i] <= v[j]) {
            *slot = v[i];
            i += 1;
        } else {
            *slot = v[j];
            count += (mid - i) as u64;
            j += 1;
        }
    }
    v.copy_from_slice(&buf[..n]);
    count
}
