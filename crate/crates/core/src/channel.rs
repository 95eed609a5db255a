use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{dims, Error, Result};
use crate::number::{abs_diff, one};

/// A discrete memoryless channel: `entries[i][j]` is the probability that
/// output `j` is received when input `i` is sent.
///
/// Rows are stochastic. Entries are exact rationals, which keeps tie
/// detection unambiguous.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Channel {
    entries: Vec<Vec<BigRational>>,
}

/// How rows are checked when a channel is validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    /// Largest accepted `|row sum - 1|`. Zero demands exact stochastic rows.
    pub tolerance: BigRational,
    /// Divide each row by its sum instead of rejecting it.
    pub normalize: bool,
}

impl Default for Validation {
    fn default() -> Self {
        Self {
            tolerance: BigRational::zero(),
            normalize: false,
        }
    }
}

impl Validation {
    pub fn with_tolerance(tolerance: BigRational) -> Self {
        Self {
            tolerance,
            normalize: false,
        }
    }
}

impl Channel {
    /// Validates a raw grid with exact row sums.
    pub fn new(raw: Vec<Vec<BigRational>>) -> Result<Self> {
        Self::validate(raw, &Validation::default())
    }

    pub fn validate(raw: Vec<Vec<BigRational>>, rules: &Validation) -> Result<Self> {
        check_shape(&raw)?;
        let mut entries = raw;
        for (i, row) in entries.iter_mut().enumerate() {
            if let Some(j) = row.iter().position(|x| x.is_negative()) {
                return Err(Error::NegativeEntry { row: i + 1, col: j + 1 });
            }
            let sum: BigRational = row.iter().sum();
            if rules.normalize && !sum.is_zero() {
                for x in row.iter_mut() {
                    *x = &*x / &sum;
                }
            } else if abs_diff(&sum, &one()) > rules.tolerance {
                return Err(Error::RowSumViolation { row: i + 1, actual: sum });
            }
        }
        Ok(Self { entries })
    }

    /// Wraps a non-negative rectangular grid without the stochastic-row check.
    ///
    /// Weak-order extraction and equivalence are defined on any non-negative
    /// matrix; distances still expect a validated channel.
    pub fn from_nonnegative(raw: Vec<Vec<BigRational>>) -> Result<Self> {
        check_shape(&raw)?;
        for (i, row) in raw.iter().enumerate() {
            if let Some(j) = row.iter().position(|x| x.is_negative()) {
                return Err(Error::NegativeEntry { row: i + 1, col: j + 1 });
            }
        }
        Ok(Self { entries: raw })
    }

    pub fn n_inputs(&self) -> usize {
        self.entries.len()
    }

    pub fn m_outputs(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, input: usize, output: usize) -> &BigRational {
        &self.entries[input][output]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    /// Column `j` as a vector over inputs.
    pub fn column(&self, j: usize) -> Vec<BigRational> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigRational>> {
        (0..self.m_outputs()).map(|j| self.column(j)).collect()
    }

    /// The 1-norm of column `j`.
    pub fn column_norm(&self, j: usize) -> BigRational {
        self.entries.iter().map(|row| &row[j]).sum()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_inputs(), self.m_outputs())
    }

    pub(crate) fn ensure_same_dims(&self, other: &Channel) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                left: dims(self.n_inputs(), self.m_outputs()),
                right: dims(other.n_inputs(), other.m_outputs()),
            });
        }
        Ok(())
    }

    /// The `n x n` noiseless channel.
    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        Self { entries }
    }
}

fn check_shape(raw: &[Vec<BigRational>]) -> Result<usize> {
    let m = raw.first().map(Vec::len).unwrap_or(0);
    if m == 0 {
        return Err(Error::EmptyGrid);
    }
    for (i, row) in raw.iter().enumerate() {
        if row.len() != m {
            return Err(Error::NotRectangular {
                row: i + 1,
                expected: m,
                found: row.len(),
            });
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::parse_rational;

    fn grid(rows: &[&[&str]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|s| parse_rational(s).unwrap()).collect())
            .collect()
    }

    #[test]
    fn identity_is_a_channel() {
        let ch = Channel::new(grid(&[&["1", "0"], &["0", "1"]])).unwrap();
        assert_eq!(ch, Channel::identity(2));
    }

    #[test]
    fn rational_example_channel() {
        let ch = Channel::new(grid(&[
            &["5/8", "1/8", "2/8"],
            &["2/8", "5/8", "1/8"],
            &["1/8", "2/8", "5/8"],
        ]))
        .unwrap();
        assert_eq!(ch.dims(), (3, 3));
        assert_eq!(ch.column_norm(2), one());
    }

    #[test]
    fn short_row_sum_is_rejected() {
        let err = Channel::new(grid(&[&["0.5", "0.4"]])).unwrap_err();
        assert_eq!(
            err,
            Error::RowSumViolation {
                row: 1,
                actual: parse_rational("9/10").unwrap()
            }
        );
    }

    #[test]
    fn tolerance_and_normalization() {
        let raw = grid(&[&["0.333", "0.667"], &["0.5", "0.5001"]]);
        let loose = Validation::with_tolerance(parse_rational("0.001").unwrap());
        assert!(Channel::validate(raw.clone(), &loose).is_ok());
        let ch = Channel::validate(
            raw,
            &Validation {
                tolerance: BigRational::zero(),
                normalize: true,
            },
        )
        .unwrap();
        for row in ch.rows() {
            assert_eq!(row.iter().sum::<BigRational>(), one());
        }
    }

    #[test]
    fn negative_and_shape_errors() {
        assert_eq!(
            Channel::new(grid(&[&["1", "0"], &["-1", "2"]])).unwrap_err(),
            Error::NegativeEntry { row: 2, col: 1 }
        );
        assert_eq!(Channel::new(vec![]).unwrap_err(), Error::EmptyGrid);
        assert!(matches!(
            Channel::new(grid(&[&["1", "0"], &["1"]])).unwrap_err(),
            Error::NotRectangular { row: 2, .. }
        ));
    }

    #[test]
    fn nonnegative_grid_skips_row_sums() {
        let m = Channel::from_nonnegative(grid(&[&["9", "2"], &["8", "6"]])).unwrap();
        assert_eq!(m.dims(), (2, 2));
    }
}
