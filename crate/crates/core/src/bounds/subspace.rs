//! Per-sub-space capacity bounders plugged into the sub-space sum bound.

use std::f64::consts::{E, PI};

use super::waterfill::waterfill;
use crate::channel::SubRegion;
use crate::error::{Error, Result};
use crate::linalg::{self, RealMatrix};

/// Everything a bounder may need about one sub-space of the zero-forced channel.
#[derive(Debug, Clone, Copy)]
pub struct Subspace<'a> {
    pub region: &'a SubRegion,
    /// Noise covariance block `D_i`.
    pub block: &'a RealMatrix,
    /// Whitener `M_i` with `D_i = sigma^2 M_i^{-1} M_i^{-T}`.
    pub whitener: &'a RealMatrix,
    /// Common radius after normalization.
    pub radius: f64,
    pub sigma_z: f64,
}

/// Upper bound, in nats, on the capacity of a single sub-space channel
/// `X_i + Z_i` with `X_i` in its sub-region and `Z_i ~ N(0, D_i)`.
pub trait SubspaceBounder: Sync {
    fn name(&self) -> &'static str;

    fn bound(&self, sub: &Subspace<'_>) -> Result<f64>;
}

/// Closed-form bound for a 2-D amplitude-constrained channel with gain
/// `lambda`: `ln(1 + sqrt(pi/2) x + x^2 / (2e))`, `x = lambda R / sigma`.
pub fn mckellips_ci(gain: f64, radius: f64, sigma_z: f64) -> f64 {
    let x = gain * radius / sigma_z;
    ((PI / 2.0).sqrt() * x + x * x / (2.0 * E)).ln_1p()
}

/// McKellips-type bound; only defined for discs (one complex antenna).
#[derive(Debug, Clone, Copy, Default)]
pub struct McKellips;

impl SubspaceBounder for McKellips {
    fn name(&self) -> &'static str {
        "mckellips"
    }

    fn bound(&self, sub: &Subspace<'_>) -> Result<f64> {
        if !sub.region.is_disc() {
            return Err(Error::Unsupported(format!(
                "McKellips-type bound needs a 2-D ball, got a {}-D {:?}",
                sub.region.dim, sub.region.shape
            )));
        }
        let gain = linalg::paired_singular_values(sub.whitener)?[0];
        Ok(mckellips_ci(gain, sub.radius, sub.sigma_z))
    }
}

/// Gaussian bound under the looser average-power constraint
/// `E|X_i|^2 <= R^2`: water-filling over the eigenvalues of `D_i`.
/// Works for any sub-region shape.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianPower;

impl SubspaceBounder for GaussianPower {
    fn name(&self) -> &'static str {
        "gaussian"
    }

    fn bound(&self, sub: &Subspace<'_>) -> Result<f64> {
        let eigenvalues = linalg::svd(sub.block)?.singular_values;
        gaussian_waterfill_nats(&eigenvalues, sub.radius * sub.radius)
    }
}

/// `sum_i (1/2) ln(1 + P_i / n_i)` for the water-filling allocation.
pub(crate) fn gaussian_waterfill_nats(noise: &[f64], budget: f64) -> Result<f64> {
    let alloc = waterfill(noise, budget)?;
    Ok(alloc
        .powers
        .iter()
        .zip(noise)
        .map(|(p, n)| 0.5 * (p / n).ln_1p())
        .sum())
}
