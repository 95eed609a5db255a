//! Brute-force ground truth.
//!
//! Everything here decodes explicit codes by taking the argmax of a column
//! restricted to the code, and counts by walking every nonempty subset of
//! the inputs. Nothing in this module uses the closed forms it checks.

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::metrics::{output_distribution, Prior};
use crate::number::to_f64;
use crate::order::TieRule;
use crate::perm::AgreementCount;
use crate::ranking::Ranking;

/// Largest input alphabet the exhaustive oracle walks (2^20 - 1 codes).
pub const ORACLE_LIMIT: usize = 20;

/// Identifier of the Monte Carlo generator and its sub-stream layout.
pub const RNG_ALGORITHM: &str = "chacha8-stream-per-chunk-16384";

const CHUNK: u64 = 1 << 14;

/// A nonempty subset of the inputs, stored as a bit mask (bit `i` = input `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code {
    mask: u64,
    n: usize,
}

impl Code {
    pub fn from_mask(mask: u64, n: usize) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::TooLarge {
                what: "code alphabet",
                n,
                limit: 63,
            });
        }
        if mask == 0 {
            return Err(Error::EmptyCode);
        }
        if mask >> n != 0 {
            return Err(Error::CodeOutOfRange {
                member: 64 - mask.leading_zeros() as usize,
                n,
            });
        }
        Ok(Self { mask, n })
    }

    /// From zero-based members.
    pub fn new(members: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u64;
        for &i in members {
            if i >= n || i >= 63 {
                return Err(Error::CodeOutOfRange { member: i + 1, n });
            }
            mask |= 1 << i;
        }
        Self::from_mask(mask, n)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.mask >> i & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    /// Every nonempty code on `n` inputs, in increasing mask order.
    pub fn all(n: usize) -> Result<impl Iterator<Item = Code>> {
        check_limit(n)?;
        Ok((1..1u64 << n).map(move |mask| Code { mask, n }))
    }
}

/// The set of maximum likelihood codewords.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecodeResult {
    pub winners: Code,
}

impl DecodeResult {
    pub fn unique(&self) -> Option<usize> {
        (self.winners.len() == 1).then(|| self.winners.mask.trailing_zeros() as usize)
    }
}

/// All members of `code` that maximize `column`.
pub fn ml_decode<T: Ord>(column: &[T], code: &Code) -> Result<DecodeResult> {
    if column.len() != code.n {
        return Err(Error::DimensionMismatch {
            left: format!("column of length {}", column.len()),
            right: format!("code over {} inputs", code.n),
        });
    }
    Ok(decode_unchecked(column, code.mask, code.n))
}

fn decode_unchecked<T: Ord>(column: &[T], mask: u64, n: usize) -> DecodeResult {
    let mut best: Option<&T> = None;
    let mut winners = 0u64;
    for (i, v) in column.iter().enumerate() {
        if mask >> i & 1 == 0 {
            continue;
        }
        match best {
            Some(b) if v < b => {}
            Some(b) if v == b => winners |= 1 << i,
            _ => {
                best = Some(v);
                winners = 1 << i;
            }
        }
    }
    DecodeResult {
        winners: Code { mask: winners, n },
    }
}

fn check_limit(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyCode);
    }
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            what: "oracle alphabet",
            n,
            limit: ORACLE_LIMIT,
        });
    }
    Ok(())
}

// Higher score = more likely.
fn scores(r: &Ranking) -> Vec<usize> {
    r.inv().iter().map(|&k| r.len() - k).collect()
}

fn total_codes(n: usize) -> u64 {
    (1u64 << n) - 1
}

/// Counts codes where `σ` and `φ` pick the same codeword, by enumeration.
pub fn oracle_s_pair(sigma: &Ranking, phi: &Ranking) -> Result<AgreementCount> {
    if sigma.len() != phi.len() {
        return Err(Error::DimensionMismatch {
            left: format!("n={}", sigma.len()),
            right: format!("n={}", phi.len()),
        });
    }
    let n = sigma.len();
    check_limit(n)?;
    let (a, b) = (scores(sigma), scores(phi));
    let count = (1..=total_codes(n))
        .into_par_iter()
        .filter(|&mask| decode_unchecked(&a, mask, n) == decode_unchecked(&b, mask, n))
        .count();
    Ok(AgreementCount {
        value: BigUint::from(count),
        n,
    })
}

fn stable_pair(p: &Channel, q: &Channel) -> Result<()> {
    p.ensure_same_dims(q)?;
    check_limit(p.n_inputs())?;
    for (name, ch) in [("p", p), ("q", q)] {
        for j in 0..ch.m_outputs() {
            let col = ch.column(j);
            let mut sorted = col.clone();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::UnstableChannel {
                    channel: name,
                    column: j + 1,
                });
            }
        }
    }
    Ok(())
}

/// Per-column count of codes on which the decoders of `p` and `q` agree.
pub fn oracle_column_agreements(p: &Channel, q: &Channel) -> Result<Vec<u64>> {
    stable_pair(p, q)?;
    let n = p.n_inputs();
    let (pc, qc) = (p.columns(), q.columns());
    Ok(pc
        .iter()
        .zip(&qc)
        .map(|(a, b)| {
            (1..=total_codes(n))
                .into_par_iter()
                .filter(|&mask| decode_unchecked(a, mask, n) == decode_unchecked(b, mask, n))
                .count() as u64
        })
        .collect())
}

/// `Σ_C Σ_y Pr(y) [Dec_C(P_y) = Dec_C(Q_y)] / (2^n - 1)` with `Pr(y)` under
/// the true channel `p`.
pub fn oracle_radial_probability(p: &Channel, q: &Channel, prior: &Prior) -> Result<BigRational> {
    let weights = output_distribution(p, prior)?;
    let counts = oracle_column_agreements(p, q)?;
    let total = BigRational::from_integer(total_codes(p.n_inputs()).into());
    let sum: BigRational = counts
        .iter()
        .zip(&weights)
        .map(|(&c, w)| BigRational::from_integer(c.into()) * w)
        .sum();
    Ok(sum / total)
}

/// Codes on which the full decoders (every column at once) coincide.
pub fn oracle_global_agreement(p: &Channel, q: &Channel) -> Result<AgreementCount> {
    stable_pair(p, q)?;
    let n = p.n_inputs();
    let (pc, qc) = (p.columns(), q.columns());
    let count = (1..=total_codes(n))
        .into_par_iter()
        .filter(|&mask| {
            pc.iter()
                .zip(&qc)
                .all(|(a, b)| decode_unchecked(a, mask, n) == decode_unchecked(b, mask, n))
        })
        .count();
    Ok(AgreementCount {
        value: BigUint::from(count),
        n,
    })
}

/// Decoder-set comparison over every code and column; accepts unstable
/// channels and is the brute-force side of decoding equivalence.
pub fn oracle_same_decoders(p: &Channel, q: &Channel) -> Result<bool> {
    p.ensure_same_dims(q)?;
    let n = p.n_inputs();
    check_limit(n)?;
    let (pc, qc) = (p.columns(), q.columns());
    Ok((1..=total_codes(n)).into_par_iter().all(|mask| {
        pc.iter()
            .zip(&qc)
            .all(|(a, b)| decode_unchecked(a, mask, n) == decode_unchecked(b, mask, n))
    }))
}

/// A uniformly random nonempty code.
pub fn sample_code<R: Rng>(rng: &mut R, n: usize) -> Code {
    assert!((1..=63).contains(&n), "code alphabet out of range");
    Code {
        mask: rng.gen_range(1..=total_codes(n)),
        n,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    pub agreements: u64,
    pub estimate: f64,
    pub standard_error: f64,
    pub seed: u64,
    pub rng: &'static str,
}

/// Samples `(code, output)` pairs and reports the empirical agreement
/// frequency with its binomial standard error.
///
/// Chunk `k` of 16384 samples draws from ChaCha8 seeded by `seed` on stream
/// `k`, so the result does not depend on the number of worker threads.
pub fn monte_carlo_radial(
    p: &Channel,
    q: &Channel,
    prior: &Prior,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    p.ensure_same_dims(q)?;
    let n = p.n_inputs();
    if n > 63 {
        return Err(Error::TooLarge {
            what: "code alphabet",
            n,
            limit: 63,
        });
    }
    for (name, ch) in [("p", p), ("q", q)] {
        for j in 0..ch.m_outputs() {
            if crate::order::column_ranking(ch, j, &TieRule::Exact).is_err() {
                return Err(Error::UnstableChannel {
                    channel: name,
                    column: j + 1,
                });
            }
        }
    }
    let mut cumulative = Vec::with_capacity(p.m_outputs());
    let mut acc = 0.0;
    for w in output_distribution(p, prior)? {
        acc += to_f64(&w);
        cumulative.push(acc);
    }
    let (pc, qc) = (p.columns(), q.columns());
    let chunks = samples.div_ceil(CHUNK);
    let agreements: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let len = CHUNK.min(samples - k * CHUNK);
            let mut hits = 0u64;
            for _ in 0..len {
                let code = sample_code(&mut rng, n);
                let u: f64 = rng.gen::<f64>() * acc;
                let y = cumulative
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(cumulative.len() - 1);
                let a = decode_unchecked(&pc[y], code.mask, n);
                let b = decode_unchecked(&qc[y], code.mask, n);
                hits += u64::from(a == b);
            }
            hits
        })
        .sum();
    let estimate = agreements as f64 / samples as f64;
    Ok(MonteCarloEstimate {
        samples,
        agreements,
        estimate,
        standard_error: (estimate * (1.0 - estimate) / samples as f64).sqrt(),
        seed,
        rng: RNG_ALGORITHM,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::parse_rational;

    fn col(v: &[&str]) -> Vec<BigRational> {
        v.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    fn code(members: &[usize], n: usize) -> Code {
        Code::new(members, n).unwrap()
    }

    #[test]
    fn decode_examples() {
        let c = col(&["2/8", "1/8", "5/8"]);
        let r = ml_decode(&c, &code(&[0, 1], 3)).unwrap();
        assert_eq!(r.winners, code(&[0], 3));
        assert_eq!(r.unique(), Some(0));
        let tied = col(&["1", "1", "0"]);
        let r = ml_decode(&tied, &code(&[0, 1], 3)).unwrap();
        assert_eq!(r.winners, code(&[0, 1], 3));
        assert_eq!(r.unique(), None);
        for k in 0..3 {
            assert_eq!(ml_decode(&c, &code(&[k], 3)).unwrap().winners, code(&[k], 3));
        }
    }

    #[test]
    fn code_errors() {
        assert_eq!(Code::new(&[], 3).unwrap_err(), Error::EmptyCode);
        assert!(matches!(Code::new(&[3], 3), Err(Error::CodeOutOfRange { .. })));
        assert!(matches!(Code::from_mask(0b1000, 3), Err(Error::CodeOutOfRange { .. })));
        assert!(ml_decode(&col(&["1", "0"]), &code(&[0], 3)).is_err());
        assert_eq!(Code::all(3).unwrap().count(), 7);
        assert!(Code::all(21).is_err());
    }

    #[test]
    fn oracle_s_pair_examples() {
        let id3 = Ranking::identity(3);
        assert_eq!(oracle_s_pair(&id3, &id3).unwrap().value, BigUint::from(7u32));
        let swap12 = Ranking::from_ranks(&[2, 1, 3]).unwrap();
        assert_eq!(oracle_s_pair(&id3, &swap12).unwrap().value, BigUint::from(5u32));
        let id4 = Ranking::identity(4);
        assert_eq!(
            oracle_s_pair(&id4, &Ranking::reversal(4)).unwrap().value,
            BigUint::from(4u32)
        );
        assert!(matches!(
            oracle_s_pair(&Ranking::identity(21), &Ranking::identity(21)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn winners_maximize() {
        let c = col(&["3", "1", "3", "2"]);
        for code in Code::all(4).unwrap() {
            let w = ml_decode(&c, &code).unwrap().winners;
            let best = code.members().map(|i| &c[i]).max().unwrap();
            for k in code.members() {
                assert_eq!(w.contains(k), &c[k] == best);
            }
        }
    }

    #[test]
    fn code_sampling_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 70_000;
        let mut counts = [0u32; 8];
        for _ in 0..draws {
            counts[sample_code(&mut rng, 3).mask() as usize] += 1;
        }
        assert_eq!(counts[0], 0);
        let expected = draws as f64 / 7.0;
        let chi2: f64 = counts[1..]
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 6 degrees of freedom, 0.999 quantile.
        assert!(chi2 < 22.458, "chi-square {chi2}");
    }
}
