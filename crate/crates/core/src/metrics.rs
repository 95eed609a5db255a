//! Channel-level decoding distances for stable channels.
//!
//! The radial agreement probability centered at the true channel `P` is
//! `(1 / (n (2^n - 1))) Σ_i S(σ_i, φ_i) ‖P_i‖₁`, where `σ_i` and `φ_i` are
//! the column rankings of `P` and `Q`. It depends on `Q` only through
//! `O⁻Q`. An explicit input prior replaces `‖P_i‖₁ / n` by `Pr(y_i)`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::number::format_rational;
use crate::oracle;
use crate::order::{column_ranking, TieRule};
use crate::perm::{s_pair, AgreementCount};
use crate::ranking::{Ranking, CONVENTION};

/// Distribution of the sent input.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Prior {
    #[default]
    Uniform,
    Explicit(Vec<BigRational>),
}

impl Prior {
    pub fn explicit(weights: Vec<BigRational>) -> Result<Self> {
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::BadPrior("negative weight".into()));
        }
        let sum: BigRational = weights.iter().sum();
        if sum != BigRational::one() {
            return Err(Error::BadPrior(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Prior::Explicit(weights))
    }

    pub fn label(&self) -> String {
        match self {
            Prior::Uniform => "uniform".into(),
            Prior::Explicit(w) => w.iter().map(format_rational).collect::<Vec<_>>().join(","),
        }
    }

    fn weights(&self, n: usize) -> Result<Vec<BigRational>> {
        match self {
            Prior::Uniform => Ok(vec![BigRational::new(1.into(), n.into()); n]),
            Prior::Explicit(w) if w.len() == n => Ok(w.clone()),
            Prior::Explicit(w) => Err(Error::BadPrior(format!(
                "{} weights for {n} inputs",
                w.len()
            ))),
        }
    }
}

/// `Pr(y_i) = Σ_j P[j][i] Pr(x_j)`.
pub fn output_distribution(p: &Channel, prior: &Prior) -> Result<Vec<BigRational>> {
    let w = prior.weights(p.n_inputs())?;
    Ok((0..p.m_outputs())
        .map(|i| p.rows().iter().zip(&w).map(|(row, wj)| &row[i] * wj).sum())
        .collect())
}

/// Per-column breakdown of a radial agreement computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub per_column_s: Vec<BigUint>,
    pub column_norms: Vec<BigRational>,
    pub probability: BigRational,
    pub distance: BigRational,
    pub prior: String,
}

#[derive(Serialize)]
struct ReportRepr<'a> {
    per_column_s: Vec<u64>,
    column_norms: Vec<String>,
    probability: String,
    distance: String,
    convention: &'a str,
    prior: &'a str,
}

impl Serialize for AgreementReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // n <= 63 is enforced for reports, so every S fits in u64.
        ReportRepr {
            per_column_s: self
                .per_column_s
                .iter()
                .map(|v| u64::try_from(v).unwrap_or(u64::MAX))
                .collect(),
            column_norms: self.column_norms.iter().map(format_rational).collect(),
            probability: format_rational(&self.probability),
            distance: format_rational(&self.distance),
            convention: CONVENTION,
            prior: &self.prior,
        }
        .serialize(s)
    }
}

fn stable_rankings(ch: &Channel, which: &'static str, tie: &TieRule) -> Result<Vec<Ranking>> {
    (0..ch.m_outputs())
        .map(|j| {
            column_ranking(ch, j, tie).map_err(|e| match e {
                Error::UnstableColumn { column } => Error::UnstableChannel {
                    channel: which,
                    column,
                },
                other => other,
            })
        })
        .collect()
}

fn check_report_size(n: usize) -> Result<()> {
    if n > 63 {
        return Err(Error::TooLarge {
            what: "channel inputs",
            n,
            limit: 63,
        });
    }
    Ok(())
}

/// Closed-form radial agreement of `q` against the true channel `p`.
pub fn radial_agreement(p: &Channel, q: &Channel, prior: &Prior, tie: &TieRule) -> Result<AgreementReport> {
    p.ensure_same_dims(q)?;
    let n = p.n_inputs();
    check_report_size(n)?;
    let sigmas = stable_rankings(p, "p", tie)?;
    let phis = stable_rankings(q, "q", tie)?;
    let weights = output_distribution(p, prior)?;
    let per_column_s: Vec<BigUint> = sigmas
        .iter()
        .zip(&phis)
        .map(|(s, f)| s_pair(s, f).map(|c| c.value))
        .collect::<Result<_>>()?;
    let total = BigRational::from_integer(AgreementCount::total_codes(n).into());
    let probability = per_column_s
        .iter()
        .zip(&weights)
        .map(|(s, w)| BigRational::from_integer(s.clone().into()) * w)
        .sum::<BigRational>()
        / total;
    Ok(AgreementReport {
        column_norms: (0..p.m_outputs()).map(|j| p.column_norm(j)).collect(),
        distance: BigRational::one() - &probability,
        probability,
        per_column_s,
        prior: prior.label(),
    })
}

pub fn radial_agreement_probability(p: &Channel, q: &Channel, prior: &Prior, tie: &TieRule) -> Result<BigRational> {
    Ok(radial_agreement(p, q, prior, tie)?.probability)
}

/// `d^P(Q)`: one minus the radial agreement probability.
pub fn radial_decoding_distance(p: &Channel, q: &Channel, prior: &Prior, tie: &TieRule) -> Result<BigRational> {
    Ok(radial_agreement(p, q, prior, tie)?.distance)
}

/// `d(P, Q) = 1 - Pr(full decoders coincide)`, by enumeration of every code.
pub fn global_decoding_distance(p: &Channel, q: &Channel, tie: &TieRule) -> Result<BigRational> {
    stable_rankings(p, "p", tie)?;
    stable_rankings(q, "q", tie)?;
    let agree = oracle::oracle_global_agreement(p, q)?;
    Ok(BigRational::one() - agree.probability())
}

/// Sum of the column norms; `n` for any stochastic channel.
pub fn total_norm(report: &AgreementReport) -> BigRational {
    report
        .column_norms
        .iter()
        .fold(BigRational::zero(), |acc, x| acc + x)
}
