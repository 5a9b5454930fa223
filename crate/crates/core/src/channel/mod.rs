//! Channel instances: constraint region, channel matrix and noise level.
//!
//! A [`ChannelModel`] describes `Y = H X + sigma_z Z` with `X` confined to a
//! Cartesian product of sub-regions and `Z` standard normal. The SNR is
//! `R^2 / (N sigma_z^2)` where `R` is the common sub-region radius; models
//! with unequal radii are brought to a common radius by [`normalize_radii`],
//! which rescales the matching column blocks of `H`.

mod file;
mod region;

pub use file::{load_model, read_model, save_model, write_model, ChannelFile};
pub use region::{volume, ConstraintRegion, Shape, SubRegion};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, RealMatrix};

/// Redraw budget for ill-conditioned random channels.
pub const MAX_REDRAWS: usize = 100;

/// Whitener gains of the two-antenna reference configuration.
pub const REFERENCE_WHITENER_GAINS: [f64; 2] = [0.52, 0.37];

/// Off-diagonal correlation used to build the reference channel.
pub const REFERENCE_CORRELATION: (f64, f64) = (0.5, std::f64::consts::FRAC_PI_4);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrPoint {
    pub snr_linear: f64,
    pub snr_db: f64,
}

impl SnrPoint {
    pub fn from_db(snr_db: f64) -> Self {
        Self {
            snr_linear: db_to_linear(snr_db),
            snr_db,
        }
    }

    pub fn from_linear(snr_linear: f64) -> Self {
        Self {
            snr_linear,
            snr_db: 10.0 * snr_linear.log10(),
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    h: RealMatrix,
    sigma_z2: f64,
    region: ConstraintRegion,
}

impl ChannelModel {
    pub fn new(h: RealMatrix, sigma_z2: f64, region: ConstraintRegion) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::NotSquare {
                rows: h.nrows(),
                cols: h.ncols(),
            });
        }
        if h.nrows() != region.dimension() {
            return Err(Error::DimensionMismatch {
                expected: h.nrows(),
                found: region.dimension(),
            });
        }
        if !(sigma_z2.is_finite() && sigma_z2 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "noise variance must be positive and finite, got {sigma_z2}"
            )));
        }
        h.ensure_full_rank()?;
        Ok(Self {
            h,
            sigma_z2,
            region,
        })
    }

    /// Realified complex channel with one disc of `radius` per antenna.
    pub fn per_antenna(hc: &ComplexMatrix, radius: f64, sigma_z2: f64) -> Result<Self> {
        let h = linalg::realify(hc)?;
        let region = ConstraintRegion::per_antenna(hc.nrows(), radius)?;
        Self::new(h, sigma_z2, region)
    }

    pub fn h(&self) -> &RealMatrix {
        &self.h
    }

    pub fn sigma_z2(&self) -> f64 {
        self.sigma_z2
    }

    pub fn sigma_z(&self) -> f64 {
        self.sigma_z2.sqrt()
    }

    pub fn region(&self) -> &ConstraintRegion {
        &self.region
    }

    pub fn dimension(&self) -> usize {
        self.h.nrows()
    }

    /// SNR with respect to the common radius `R_1`.
    pub fn snr(&self) -> SnrPoint {
        let r = self.region.common_radius();
        SnrPoint::from_linear(r * r / (self.dimension() as f64 * self.sigma_z2))
    }

    pub fn with_sigma_z2(&self, sigma_z2: f64) -> Result<Self> {
        if !(sigma_z2.is_finite() && sigma_z2 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "noise variance must be positive and finite, got {sigma_z2}"
            )));
        }
        Ok(Self {
            sigma_z2,
            ..self.clone()
        })
    }

    /// Same channel with the noise variance set for `snr_db`.
    pub fn with_snr_db(&self, snr_db: f64) -> Result<Self> {
        let normalized = self.normalize_radii();
        let sigma_z2 = sigma_for_snr(normalized.region(), snr_db)?;
        self.with_sigma_z2(sigma_z2)
    }

    /// Equivalent model with every radius equal to `R_1`.
    pub fn normalize_radii(&self) -> Self {
        self.normalize_radii_to(self.region.common_radius())
    }

    /// Equivalent model with every radius equal to `target`; column block `i`
    /// of `H` is scaled by `R_i / target` so that `H X` is unchanged.
    pub fn normalize_radii_to(&self, target: f64) -> Self {
        if self.region.subregions().iter().all(|s| s.radius == target) {
            return self.clone();
        }
        let mut h = self.h.as_dmatrix().clone();
        let partition = self.region.partition();
        for (i, sub) in self.region.subregions().iter().enumerate() {
            let scale = sub.radius / target;
            let range = partition.range(i).expect("partition built from region");
            for c in range {
                h.column_mut(c).scale_mut(scale);
            }
        }
        Self {
            h: RealMatrix::new(h).expect("finite scaling of a finite matrix"),
            sigma_z2: self.sigma_z2,
            region: self.region.with_radii(target),
        }
    }
}

pub fn normalize_radii(model: &ChannelModel) -> ChannelModel {
    model.normalize_radii()
}

/// Noise variance giving `snr_db` for a region of common radius `R`:
/// `R^2 / (N snr)`.
pub fn sigma_for_snr(region: &ConstraintRegion, snr_db: f64) -> Result<f64> {
    if !region.is_normalized() {
        return Err(Error::InvalidArgument(
            "SNR requires a region with a common radius; normalize first".into(),
        ));
    }
    if !snr_db.is_finite() {
        return Err(Error::InvalidArgument(format!("SNR must be finite, got {snr_db}")));
    }
    let r = region.common_radius();
    Ok(r * r / (region.dimension() as f64 * db_to_linear(snr_db)))
}

/// `n x n` matrix of i.i.d. `CN(0, 1)` entries, redrawn while its condition
/// number exceeds [`linalg::CONDITION_LIMIT`].
pub fn random_channel(n_complex: usize, seed: u64) -> Result<ComplexMatrix> {
    if n_complex == 0 {
        return Err(Error::InvalidArgument("n_complex must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let std = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..MAX_REDRAWS {
        let m = DMatrix::from_fn(n_complex, n_complex, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(std * re, std * im)
        });
        let hc = ComplexMatrix::new(m)?;
        if linalg::realify(&hc)?.ensure_full_rank().is_ok() {
            return Ok(hc);
        }
    }
    Err(Error::RedrawExhausted(MAX_REDRAWS))
}

/// Rescales `hc` so its largest singular value is one.
pub fn unit_spectral_norm(hc: &ComplexMatrix) -> Result<ComplexMatrix> {
    let s = linalg::svd(&linalg::realify(hc)?)?.singular_values[0];
    if s <= 0.0 {
        return Err(Error::RankDeficient {
            condition: f64::INFINITY,
        });
    }
    hc.scale(1.0 / s)
}

/// Builds a complex channel whose per-antenna whiteners have singular values
/// `gains`.
///
/// The whitened noise covariance of a realified channel is
/// `sigma^2 realify((H^H H)^{-1})`, and the whitener gain of antenna `i` is
/// `1 / sqrt(W_ii)` with `W = (H^H H)^{-1}`. We pick `W` with diagonal
/// `1 / gains^2` and off-diagonal entries `rho e^{j phi} / (g_i g_j)` (upper
/// triangle), then take `H = L^H` where `L L^H = W^{-1}`.
pub fn channel_with_whitener_gains(gains: &[f64], rho: f64, phase: f64) -> Result<ComplexMatrix> {
    let n = gains.len();
    if n == 0 || gains.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        return Err(Error::InvalidArgument("whitener gains must be positive".into()));
    }
    let off = Complex64::from_polar(rho, phase);
    let w = DMatrix::from_fn(n, n, |r, c| {
        let scale = 1.0 / (gains[r] * gains[c]);
        match r.cmp(&c) {
            std::cmp::Ordering::Equal => Complex64::new(scale, 0.0),
            std::cmp::Ordering::Less => off * scale,
            std::cmp::Ordering::Greater => off.conj() * scale,
        }
    });
    let target = ComplexMatrix::new(w.clone())?;
    linalg::cholesky_lower(&linalg::realify(&target)?)?;
    let g = w.try_inverse().ok_or(Error::NotPositiveDefinite)?;
    let chol = nalgebra::Cholesky::new(g).ok_or(Error::NotPositiveDefinite)?;
    ComplexMatrix::new(chol.l().adjoint())
}

/// Two-antenna per-antenna model with whitener gains
/// [`REFERENCE_WHITENER_GAINS`], unit radius, at `snr_db`.
pub fn reference_model(snr_db: f64) -> Result<ChannelModel> {
    let (rho, phase) = REFERENCE_CORRELATION;
    let hc = channel_with_whitener_gains(&REFERENCE_WHITENER_GAINS, rho, phase)?;
    ChannelModel::per_antenna(&hc, 1.0, 1.0)?.with_snr_db(snr_db)
}
