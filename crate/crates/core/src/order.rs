//! Weak orders and the weak-order matrix `O⁻`.
//!
//! A weak order is stored as dense ranks, rank 1 for the largest value. Two
//! channels are decoding equivalent exactly when their weak-order matrices
//! match, and each weak order names one decoding cone whose dimension is
//! its number of blocks.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::ranking::Ranking;

/// Default cap on `n` for [`enumerate_weak_orders`]; Fubini(6) = 4683.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 6;

/// When two entries count as tied.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TieRule {
    /// Only equal values tie.
    #[default]
    Exact,
    /// Sorted values whose gap is at most `epsilon` share a block. Ties chain:
    /// `a ≈ b` and `b ≈ c` puts all three together.
    Epsilon(BigRational),
}

impl TieRule {
    pub fn epsilon(eps: BigRational) -> Result<Self> {
        if eps.is_negative() {
            return Err(Error::Parse(format!("epsilon must be >= 0, got {eps}")));
        }
        Ok(if eps.is_zero() {
            TieRule::Exact
        } else {
            TieRule::Epsilon(eps)
        })
    }

    fn tied(&self, larger: &BigRational, smaller: &BigRational) -> bool {
        match self {
            TieRule::Exact => larger == smaller,
            TieRule::Epsilon(eps) => &(larger - smaller) <= eps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct WeakOrder {
    ranks: Vec<usize>,
}

impl WeakOrder {
    /// Checks that `ranks` is dense: values are exactly `1..=k`.
    pub fn from_ranks(ranks: Vec<usize>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::InvalidWeakOrder("empty".into()));
        }
        let k = *ranks.iter().max().expect("nonempty");
        let mut seen = vec![false; k + 1];
        for &r in &ranks {
            if r == 0 {
                return Err(Error::InvalidWeakOrder("rank 0".into()));
            }
            seen[r] = true;
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::InvalidWeakOrder(format!("{ranks:?} is not dense")));
        }
        Ok(Self { ranks })
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Zero-based inputs grouped by rank, most likely block first.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &r) in self.ranks.iter().enumerate() {
            blocks[r - 1].push(i);
        }
        blocks
    }

    /// True when every block is a singleton.
    pub fn is_strict(&self) -> bool {
        self.num_blocks() == self.len()
    }

    pub fn to_ranking(&self) -> Option<Ranking> {
        self.is_strict()
            .then(|| Ranking::from_ranks(&self.ranks).expect("strict weak order is a permutation"))
    }
}

impl<'de> Deserialize<'de> for WeakOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let ranks = Vec::<usize>::deserialize(d)?;
        WeakOrder::from_ranks(ranks).map_err(D::Error::custom)
    }
}

/// One weak order per output column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeakOrderMatrix {
    pub columns: Vec<WeakOrder>,
}

impl WeakOrderMatrix {
    /// Row-major view: `rows()[i][j]` is the rank of input `i` in column `j`.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        let n = self.columns.first().map(WeakOrder::len).unwrap_or(0);
        (0..n)
            .map(|i| self.columns.iter().map(|c| c.ranks[i]).collect())
            .collect()
    }

    pub fn is_stable(&self) -> bool {
        self.columns.iter().all(WeakOrder::is_strict)
    }
}

/// Dense ranking of a vector: rank 1 for the largest value, ties share a rank.
pub fn weak_order_column(values: &[BigRational], tie: &TieRule) -> WeakOrder {
    assert!(!values.is_empty(), "weak order of an empty column");
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].cmp(&values[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; values.len()];
    let mut rank = 1;
    ranks[idx[0]] = 1;
    for w in idx.windows(2) {
        if !tie.tied(&values[w[0]], &values[w[1]]) {
            rank += 1;
        }
        ranks[w[1]] = rank;
    }
    WeakOrder { ranks }
}

pub fn weak_order_matrix(ch: &Channel, tie: &TieRule) -> WeakOrderMatrix {
    WeakOrderMatrix {
        columns: ch
            .columns()
            .iter()
            .map(|col| weak_order_column(col, tie))
            .collect(),
    }
}

/// Same ML decoder for every code, decided through `O⁻P = O⁻Q`.
pub fn decoding_equivalent(p: &Channel, q: &Channel, tie: &TieRule) -> Result<bool> {
    p.ensure_same_dims(q)?;
    Ok(weak_order_matrix(p, tie) == weak_order_matrix(q, tie))
}

/// Every column has `n` distinct entries.
pub fn is_stable(ch: &Channel, tie: &TieRule) -> bool {
    weak_order_matrix(ch, tie).is_stable()
}

/// The ranking of inputs in output column `j` (zero-based).
pub fn column_ranking(ch: &Channel, j: usize, tie: &TieRule) -> Result<Ranking> {
    if j >= ch.m_outputs() {
        return Err(Error::IndexOutOfRange {
            index: j + 1,
            max: ch.m_outputs(),
        });
    }
    weak_order_column(&ch.column(j), tie)
        .to_ranking()
        .ok_or(Error::UnstableColumn { column: j + 1 })
}

pub fn cone_dimension(w: &WeakOrder) -> usize {
    w.num_blocks()
}

/// All weak orders on `n` elements, each once.
pub fn enumerate_weak_orders(n: usize) -> Result<Vec<WeakOrder>> {
    enumerate_weak_orders_with_limit(n, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_weak_orders_with_limit(n: usize, limit: usize) -> Result<Vec<WeakOrder>> {
    if n == 0 {
        return Err(Error::InvalidWeakOrder("n must be positive".into()));
    }
    // Masks are u32; 20 is already far beyond any practical listing.
    let hard = limit.min(20);
    if n > hard {
        return Err(Error::TooLarge {
            what: "weak order size",
            n,
            limit: hard,
        });
    }
    let mut out = Vec::new();
    let mut ranks = vec![0; n];
    ordered_partitions((1u32 << n) - 1, 1, &mut ranks, &mut out);
    Ok(out)
}

// Picks each nonempty subset of `remaining` as the next block.
fn ordered_partitions(remaining: u32, rank: usize, ranks: &mut [usize], out: &mut Vec<WeakOrder>) {
    if remaining == 0 {
        out.push(WeakOrder {
            ranks: ranks.to_vec(),
        });
        return;
    }
    let mut block = remaining;
    while block != 0 {
        for (i, r) in ranks.iter_mut().enumerate() {
            if block >> i & 1 == 1 {
                *r = rank;
            }
        }
        ordered_partitions(remaining & !block, rank + 1, ranks, out);
        block = (block - 1) & remaining;
    }
}

/// Ordered Bell number: `a(0) = 1`, `a(n) = Σ_k C(n, k) a(n - k)`.
pub fn fubini(n: usize) -> BigUint {
    let mut a = vec![BigUint::one()];
    for i in 1..=n {
        let mut binom = BigUint::one();
        let mut sum = BigUint::zero();
        for k in 1..=i {
            binom = binom * BigUint::from(i - k + 1) / BigUint::from(k);
            sum += &binom * &a[i - k];
        }
        a.push(sum);
    }
    a.swap_remove(n)
}

/// Pairwise sign pattern of a vector; equal patterns mean equal weak orders.
pub fn sign_pattern(values: &[BigRational]) -> Vec<Ordering> {
    let mut out = Vec::with_capacity(values.len() * values.len());
    for a in values {
        for b in values {
            out.push(a.cmp(b));
        }
    }
    out
}
