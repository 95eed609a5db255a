//! Rankings: the full-dimensional decoding cones, one per permutation.
//!
//! Convention: rank 1 is the most likely input. `perm[k]` is the input at
//! rank `k + 1` and `inv[i]` is the zero-based rank of input `i`, so
//! `inv = perm⁻¹`. Both vectors are zero-based internally; the 1-based forms
//! are what files, reports and the command line carry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Label written next to every serialized ranking.
pub const CONVENTION: &str = "rank1=most-likely";

/// Largest ranking size accepted by the closed-form operations.
pub const MAX_RANKING_LEN: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking {
    perm: Vec<usize>,
    inv: Vec<usize>,
}

impl Ranking {
    /// From zero-based one-line notation: `perm[k]` is the input at rank `k + 1`.
    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        if n == 0 {
            return Err(Error::InvalidRanking("empty".into()));
        }
        if n > MAX_RANKING_LEN {
            return Err(Error::TooLarge {
                what: "ranking length",
                n,
                limit: MAX_RANKING_LEN,
            });
        }
        let mut inv = vec![usize::MAX; n];
        for (k, &i) in perm.iter().enumerate() {
            if i >= n || inv[i] != usize::MAX {
                return Err(Error::InvalidRanking(format!(
                    "{:?} is not a permutation",
                    one_based(&perm)
                )));
            }
            inv[i] = k;
        }
        Ok(Self { perm, inv })
    }

    /// From 1-based one-line notation, e.g. `[3, 1, 2]`: input 3 is most likely.
    pub fn from_perm_one_based(perm: &[usize]) -> Result<Self> {
        if perm.contains(&0) {
            return Err(Error::InvalidRanking(format!("{perm:?} contains 0")));
        }
        Self::from_perm(perm.iter().map(|&i| i - 1).collect())
    }

    /// From 1-based ranks per input, the form of a tie-free column of `O⁻`.
    pub fn from_ranks(ranks: &[usize]) -> Result<Self> {
        if ranks.contains(&0) {
            return Err(Error::InvalidRanking(format!("{ranks:?} contains rank 0")));
        }
        let inv: Vec<usize> = ranks.iter().map(|&r| r - 1).collect();
        Self::from_perm(inv)
            .map(|r| r.inverse())
            .map_err(|_| Error::InvalidRanking(format!("{ranks:?} is not a permutation of ranks")))
    }

    pub fn identity(n: usize) -> Self {
        let perm: Vec<usize> = (0..n).collect();
        Self {
            inv: perm.clone(),
            perm,
        }
    }

    pub fn reversal(n: usize) -> Self {
        Self::from_perm((0..n).rev().collect()).expect("reversal is a permutation")
    }

    /// The adjacent transposition swapping inputs `r` and `r + 1` (zero-based).
    pub fn transposition(n: usize, r: usize) -> Result<Self> {
        if r + 1 >= n {
            return Err(Error::IndexOutOfRange {
                index: r + 1,
                max: n.saturating_sub(1),
            });
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(r, r + 1);
        Self::from_perm(perm)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn inv(&self) -> &[usize] {
        &self.inv
    }

    /// 1-based rank of every input.
    pub fn ranks(&self) -> Vec<usize> {
        one_based(&self.inv)
    }

    pub fn perm_one_based(&self) -> Vec<usize> {
        one_based(&self.perm)
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &i)| k == i)
    }

    pub fn inverse(&self) -> Self {
        Self {
            perm: self.inv.clone(),
            inv: self.perm.clone(),
        }
    }

    /// `self ∘ other`, applying `other` first.
    pub fn compose(&self, other: &Ranking) -> Result<Self> {
        self.ensure_same_len(other)?;
        let perm: Vec<usize> = other.perm.iter().map(|&k| self.perm[k]).collect();
        let mut inv = vec![0; perm.len()];
        for (k, &i) in perm.iter().enumerate() {
            inv[i] = k;
        }
        Ok(Self { perm, inv })
    }

    pub(crate) fn ensure_same_len(&self, other: &Ranking) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                left: format!("n={}", self.len()),
                right: format!("n={}", other.len()),
            });
        }
        Ok(())
    }

    /// Every ranking of size `n` in lexicographic order of `perm`.
    pub fn all(n: usize) -> AllRankings {
        AllRankings {
            next: (n > 0).then(|| (0..n).collect()),
        }
    }
}

/// Lexicographic iterator over `S_n`.
#[derive(Debug, Clone)]
pub struct AllRankings {
    next: Option<Vec<usize>>,
}

impl Iterator for AllRankings {
    type Item = Ranking;

    fn next(&mut self) -> Option<Ranking> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Ranking::from_perm(current).expect("iterator yields permutations"))
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|&x| x + 1).collect()
}

#[derive(Serialize, Deserialize)]
struct RankingRepr {
    perm: Vec<usize>,
    convention: String,
}

impl Serialize for Ranking {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RankingRepr {
            perm: self.perm_one_based(),
            convention: CONVENTION.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ranking {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = RankingRepr::deserialize(d)?;
        if repr.convention != CONVENTION {
            return Err(D::Error::custom(format!(
                "unsupported ranking convention {:?}",
                repr.convention
            )));
        }
        Ranking::from_perm_one_based(&repr.perm).map_err(D::Error::custom)
    }
}
