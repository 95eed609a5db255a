//! Decoding-equivalence geometry of discrete memoryless channels.
//!
//! Two channels are decoding equivalent when their maximum likelihood
//! decoders coincide on every code; that happens exactly when their
//! column-wise weak orders (`O⁻`) match. Full-dimensional cones are
//! rankings, and the crate computes exact decoding distances between
//! rankings and between stable channels, together with a brute-force
//! oracle that checks each closed form by enumerating codes.
//!
//! Ranks follow one convention throughout: rank 1 is the most likely input.

pub mod channel;
pub mod error;
pub mod io;
pub mod metrics;
pub mod number;
pub mod oracle;
pub mod order;
pub mod perm;
pub mod random;
pub mod ranking;
pub mod reference;
pub mod verify;

pub use channel::{Channel, Validation};
pub use error::{Error, Result};
pub use metrics::{
    global_decoding_distance, output_distribution, radial_agreement, radial_agreement_probability,
    radial_decoding_distance, AgreementReport, Prior,
};
pub use oracle::{
    ml_decode, monte_carlo_radial, oracle_global_agreement, oracle_radial_probability, oracle_s_pair,
    Code, DecodeResult, MonteCarloEstimate,
};
pub use order::{
    column_ranking, cone_dimension, decoding_equivalent, enumerate_weak_orders, is_stable,
    weak_order_column, weak_order_matrix, TieRule, WeakOrder, WeakOrderMatrix,
};
pub use perm::{
    agreement_probability, decoding_distance, f, kendall_tau, s_pair, s_single, transposition_delta,
    AgreementCount,
};
pub use ranking::Ranking;
