//! Small worked instances used by the tests, the `verify` command and the
//! shipped fixture files.

use num_rational::BigRational;

use crate::channel::Channel;
use crate::number::parse_rational;

fn grid(rows: &[&[&str]]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|s| parse_rational(s).expect("literal")).collect())
        .collect()
}

/// Non-stochastic 3x3 matrix whose `O⁻` has ties in the first column.
pub fn tied_matrix() -> Channel {
    Channel::from_nonnegative(grid(&[&["9", "2", "1"], &["9", "7", "0"], &["8", "6", "8"]]))
        .expect("literal")
}

/// The cyclic channel with `5/8` on the diagonal. `O⁻` columns: (1,2,3),
/// (3,1,2), (2,3,1).
pub fn cyclic_channel() -> Channel {
    Channel::new(grid(&[
        &["5/8", "1/8", "2/8"],
        &["2/8", "5/8", "1/8"],
        &["1/8", "2/8", "5/8"],
    ]))
    .expect("literal")
}

/// Differs from [`cyclic_channel`] in the third column only: ranks (3,2,1).
pub fn one_column_variant() -> Channel {
    Channel::new(grid(&[
        &["3/5", "3/10", "1/10"],
        &["3/10", "1/2", "1/5"],
        &["1/10", "2/5", "1/2"],
    ]))
    .expect("literal")
}

/// Differs from [`cyclic_channel`] in the first column only: ranks (2,1,3).
pub fn first_column_variant() -> Channel {
    Channel::new(grid(&[
        &["2/5", "1/10", "1/2"],
        &["1/2", "2/5", "1/10"],
        &["1/10", "1/5", "7/10"],
    ]))
    .expect("literal")
}

/// Values printed alongside the published worked example. They disagree with
/// exhaustive enumeration; they are kept only so reports can show both.
pub mod published {
    /// Per-column counts printed for (cyclic, one-column variant).
    pub const ONE_COLUMN_S: [u64; 3] = [7, 7, 4];
    /// Per-column counts printed for (cyclic, first-column variant).
    pub const FIRST_COLUMN_S: [u64; 3] = [5, 7, 4];
    pub const ONE_COLUMN_DISTANCE: (i64, i64) = (1, 7);
    pub const FIRST_COLUMN_DISTANCE: (i64, i64) = (5, 21);
    /// Printed value of every pairwise unrefined distance in the triple.
    pub const GLOBAL_DISTANCE: (i64, i64) = (4, 7);
}
