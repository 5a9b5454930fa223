//! Capacity bounds for peak-amplitude-constrained MIMO Gaussian channels.
//!
//! The channel is `Y = H X + sigma_z Z` with a full-rank square `H` and an
//! input confined to a Cartesian product of sub-regions `X_1 x ... x X_K`
//! (one per power amplifier). The crate computes:
//!
//! | bound | module | regime |
//! |-------|--------|--------|
//! | entropy-power lower bound | [`bounds::epi_lower_bound`] | all |
//! | sub-space sum upper bound | [`bounds::subspace_upper_bound`] | high SNR |
//! | water-filling upper bound | [`bounds::waterfilling_upper_bound`] | low SNR |
//! | per-antenna McKellips-type bound | [`bounds::per_antenna_bound`] | high SNR |
//! | compound (minimum) upper bound | [`bounds::compound_upper_bound`] | all |
//!
//! and checks them against Monte Carlo achievable rates of finite
//! constellations ([`oracle`]). All values are reported in bits per channel
//! use.
//!
//! ```
//! use peakcap::{bounds, channel};
//!
//! let model = channel::reference_model(20.0).unwrap();
//! let report = bounds::evaluate(&model).unwrap();
//! assert!(report.epi.value_bits <= report.compound.value_bits);
//! ```

pub mod bounds;
pub mod channel;
pub mod cli;
mod error;
pub mod linalg;
pub mod oracle;
pub mod sweep;

pub use error::{Error, Result};
