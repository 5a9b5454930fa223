//! Capacity bounds for Cartesian amplitude constraints.
//!
//! * [`epi_lower_bound`]: entropy-power lower bound from the volume of `H X`.
//! * [`subspace_upper_bound`]: zero-force the channel, bound each sub-space
//!   separately with a [`SubspaceBounder`] and add the log-det correction
//!   `(1/2) ln(prod det D_i / det D)` for the noise correlation across
//!   sub-spaces. Tight at high SNR.
//! * [`waterfilling_upper_bound`]: relax the peak constraint to the average
//!   power `R^2 K` and water-fill over the eigenvalues of `D`. Tight at low
//!   SNR.
//! * [`per_antenna_bound`]: the sub-space bound with the closed-form
//!   McKellips-type term for one disc per antenna.
//! * [`compound_upper_bound`]: the smallest applicable upper bound.
//!
//! Everything is computed in nats and reported in bits, floored at zero.
//! Models with unequal radii are normalized to `R_1` first.

mod noise;
mod subspace;
mod waterfill;

use std::f64::consts::{E, LN_2, PI};
use std::fmt;
use std::str::FromStr;

pub use noise::{log_det_correction, noise_covariance, NoiseCovariance};
pub use subspace::{mckellips_ci, GaussianPower, McKellips, Subspace, SubspaceBounder};
pub use waterfill::{waterfill, WaterfillAllocation};

pub(crate) use waterfill::validate as validate_waterfill_input;

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    EntropyPower,
    SubspaceSum,
    Waterfilling,
    PerAntenna,
    Compound,
    Achievable,
}

impl BoundKind {
    /// Column name used in tables and CSV output.
    pub fn column(self) -> &'static str {
        match self {
            BoundKind::EntropyPower => "epi_lb",
            BoundKind::SubspaceSum => "ub_t1",
            BoundKind::Waterfilling => "ub_t2",
            BoundKind::PerAntenna => "ub_pa1",
            BoundKind::Compound => "compound_ub",
            BoundKind::Achievable => "oracle_achievable",
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(
            self,
            BoundKind::SubspaceSum | BoundKind::Waterfilling | BoundKind::PerAntenna | BoundKind::Compound
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            BoundKind::EntropyPower,
            BoundKind::SubspaceSum,
            BoundKind::Waterfilling,
            BoundKind::PerAntenna,
            BoundKind::Compound,
            BoundKind::Achievable,
        ]
        .into_iter()
        .find(|k| k.column() == s.trim())
        .ok_or_else(|| Error::InvalidArgument(format!("unknown bound kind '{s}'")))
    }
}

/// Per-sub-space terms of a sub-space sum bound, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundDetail {
    pub subspace_bits: Vec<f64>,
    pub correction_bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub kind: BoundKind,
    pub value_bits: f64,
    pub snr_db: f64,
    pub detail: Option<BoundDetail>,
}

impl BoundResult {
    fn from_nats(kind: BoundKind, nats: f64, snr_db: f64, detail: Option<BoundDetail>) -> Self {
        Self {
            kind,
            value_bits: to_bits(nats).max(0.0),
            snr_db,
            detail,
        }
    }
}

pub fn to_bits(nats: f64) -> f64 {
    nats / LN_2
}

/// `(N/2) ln(1 + Vol(H X)^{2/N} / (2 pi e sigma^2))`.
pub fn epi_lower_bound(model: &ChannelModel) -> Result<BoundResult> {
    let model = model.normalize_radii();
    let n = model.dimension() as f64;
    let log_vol = linalg::log_det(model.h())? + model.region().log_volume();
    let ratio = (2.0 / n * log_vol - (2.0 * PI * E * model.sigma_z2()).ln()).exp();
    let nats = 0.5 * n * ratio.ln_1p();
    Ok(BoundResult::from_nats(
        BoundKind::EntropyPower,
        nats,
        model.snr().snr_db,
        None,
    ))
}

/// Water-filling bound over the eigenvalues of `D` with budget `R^2 K`.
pub fn waterfilling_upper_bound(model: &ChannelModel) -> Result<BoundResult> {
    let model = model.normalize_radii();
    let nc = NoiseCovariance::from_model(&model)?;
    waterfilling_from(&model, &nc)
}

fn waterfilling_from(model: &ChannelModel, nc: &NoiseCovariance) -> Result<BoundResult> {
    let r = model.region().common_radius();
    let budget = r * r * model.region().len() as f64;
    let nats = subspace::gaussian_waterfill_nats(&nc.eigenvalues, budget)?;
    Ok(BoundResult::from_nats(
        BoundKind::Waterfilling,
        nats,
        model.snr().snr_db,
        None,
    ))
}

/// Sum of per-sub-space bounds plus the log-det correction.
pub fn subspace_upper_bound(
    model: &ChannelModel,
    bounder: &dyn SubspaceBounder,
) -> Result<BoundResult> {
    let model = model.normalize_radii();
    let nc = NoiseCovariance::from_model(&model)?;
    subspace_from(&model, &nc, bounder, BoundKind::SubspaceSum)
}

fn subspace_from(
    model: &ChannelModel,
    nc: &NoiseCovariance,
    bounder: &dyn SubspaceBounder,
    kind: BoundKind,
) -> Result<BoundResult> {
    let radius = model.region().common_radius();
    let sigma_z = model.sigma_z();
    let terms = model
        .region()
        .subregions()
        .iter()
        .zip(nc.blocks.iter().zip(&nc.whiteners))
        .map(|(region, (block, whitener))| {
            bounder.bound(&Subspace {
                region,
                block,
                whitener,
                radius,
                sigma_z,
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let correction = nc.log_det_correction()?;
    let nats = terms.iter().sum::<f64>() + correction;
    let detail = BoundDetail {
        subspace_bits: terms.iter().map(|&t| to_bits(t)).collect(),
        correction_bits: to_bits(correction),
    };
    Ok(BoundResult::from_nats(kind, nats, model.snr().snr_db, Some(detail)))
}

/// Sub-space bound with the McKellips-type term, for one disc per antenna.
pub fn per_antenna_bound(model: &ChannelModel) -> Result<BoundResult> {
    let model = model.normalize_radii();
    let nc = NoiseCovariance::from_model(&model)?;
    per_antenna_from(&model, &nc)
}

fn per_antenna_from(model: &ChannelModel, nc: &NoiseCovariance) -> Result<BoundResult> {
    if !model.region().is_per_antenna() {
        return Err(Error::Unsupported(
            "per-antenna bound needs every sub-region to be a 2-D ball".into(),
        ));
    }
    subspace_from(model, nc, &McKellips, BoundKind::PerAntenna)
}

fn inapplicable(e: &Error) -> bool {
    matches!(e, Error::Unsupported(_) | Error::NotARealification { .. })
}

fn optional(r: Result<BoundResult>) -> Result<Option<BoundResult>> {
    match r {
        Ok(b) => Ok(Some(b)),
        Err(e) if inapplicable(&e) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Every bound at the model's SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub snr_db: f64,
    pub epi: BoundResult,
    /// Sub-space sum with [`GaussianPower`] terms.
    pub subspace: BoundResult,
    pub waterfilling: BoundResult,
    /// `None` when the region is not one disc per antenna.
    pub per_antenna: Option<BoundResult>,
    pub compound: BoundResult,
    pub correction_bits: f64,
}

impl BoundReport {
    pub fn gap_bits(&self) -> f64 {
        self.compound.value_bits - self.epi.value_bits
    }

    pub fn get(&self, kind: BoundKind) -> Option<&BoundResult> {
        match kind {
            BoundKind::EntropyPower => Some(&self.epi),
            BoundKind::SubspaceSum => Some(&self.subspace),
            BoundKind::Waterfilling => Some(&self.waterfilling),
            BoundKind::PerAntenna => self.per_antenna.as_ref(),
            BoundKind::Compound => Some(&self.compound),
            BoundKind::Achievable => None,
        }
    }
}

pub fn evaluate(model: &ChannelModel) -> Result<BoundReport> {
    let model = model.normalize_radii();
    let nc = NoiseCovariance::from_model(&model)?;
    let epi = epi_lower_bound(&model)?;
    let subspace = subspace_from(&model, &nc, &GaussianPower, BoundKind::SubspaceSum)?;
    let waterfilling = waterfilling_from(&model, &nc)?;
    let per_antenna = optional(per_antenna_from(&model, &nc))?;
    let compound = min_of(
        [Some(&subspace), Some(&waterfilling), per_antenna.as_ref()]
            .into_iter()
            .flatten(),
        model.snr().snr_db,
    );
    Ok(BoundReport {
        snr_db: model.snr().snr_db,
        correction_bits: to_bits(nc.log_det_correction()?),
        epi,
        subspace,
        waterfilling,
        per_antenna,
        compound,
    })
}

fn min_of<'a>(bounds: impl Iterator<Item = &'a BoundResult>, snr_db: f64) -> BoundResult {
    let value_bits = bounds.map(|b| b.value_bits).fold(f64::INFINITY, f64::min);
    BoundResult {
        kind: BoundKind::Compound,
        value_bits,
        snr_db,
        detail: None,
    }
}

/// Minimum over all upper bounds that apply to the model.
pub fn compound_upper_bound(model: &ChannelModel) -> Result<BoundResult> {
    Ok(evaluate(model)?.compound)
}
