//! Achievable rates of the two-tap input-erasure Gaussian channel.
//!
//! - [`analytic`]: series and closed-form rates, bounds, and high-SNR pairs.
//! - [`oracle`]: explicit matrix log-determinants, exhaustive enumeration and
//!   Monte-Carlo estimates used to validate the series.
//! - [`cellular`]: multicell vs. single-cell processing in the soft-handoff uplink.
//! - [`cli`]: the `erk` command-line front end (sweeps, figures, validation).
//!
//! All rates are in nats per channel use and all powers are linear.

pub mod analytic;
pub mod cellular;
pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod sum;

pub use analytic::{
    erasure_free_upper_bound, high_snr_two_tap, log_block_det, markov_two_tap_rate, one_tap_rate, run_length_pmf,
    two_tap_rate_iid, HighSnrCharacterization, SeriesConfig,
};
pub use cellular::{CellularParams, Scheme, SchemeComparison};
pub use error::{Error, Result};
pub use model::{derive, ChannelParams, DerivedQuantities, ErasureProcess, Meta, RateKind, RateResult};

/// Converts decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
