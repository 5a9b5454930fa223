use nalgebra::DMatrix;

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::linalg::{self, Partition, RealMatrix};

/// Noise covariance after zero-forcing, `D = sigma^2 H^{-1} H^{-T}`, split
/// along the constraint partition.
///
/// `whiteners[i]` satisfies `D_i = sigma^2 M_i^{-1} M_i^{-T}`; it is built as
/// `sigma L_i^{-1}` from the Cholesky factor `L_i` of `D_i`. Only its singular
/// values are used downstream, and those do not depend on that choice.
#[derive(Debug, Clone)]
pub struct NoiseCovariance {
    pub d: RealMatrix,
    pub partition: Partition,
    pub sigma_z2: f64,
    pub blocks: Vec<RealMatrix>,
    pub whiteners: Vec<RealMatrix>,
    /// Eigenvalues of `D`, descending.
    pub eigenvalues: Vec<f64>,
}

impl NoiseCovariance {
    pub fn from_model(model: &ChannelModel) -> Result<Self> {
        let h_inv = model.h().inverse()?;
        let d = h_inv.as_dmatrix() * h_inv.as_dmatrix().transpose() * model.sigma_z2();
        let eigenvalues = linalg::svd(model.h())?
            .singular_values
            .iter()
            .rev()
            .map(|s| model.sigma_z2() / (s * s))
            .collect();
        Self::assemble(
            symmetrize(d),
            model.region().partition(),
            model.sigma_z2(),
            eigenvalues,
        )
    }

    /// Wraps an arbitrary symmetric positive-definite covariance.
    pub fn from_covariance(d: RealMatrix, partition: Partition, sigma_z2: f64) -> Result<Self> {
        if !d.is_square() {
            return Err(Error::NotSquare {
                rows: d.nrows(),
                cols: d.ncols(),
            });
        }
        // Singular values of an SPD matrix are its eigenvalues.
        let eigenvalues = linalg::svd(&d)?.singular_values;
        Self::assemble(symmetrize(d.into_dmatrix()), partition, sigma_z2, eigenvalues)
    }

    fn assemble(
        d: RealMatrix,
        partition: Partition,
        sigma_z2: f64,
        eigenvalues: Vec<f64>,
    ) -> Result<Self> {
        if partition.dimension() != d.nrows() {
            return Err(Error::DimensionMismatch {
                expected: d.nrows(),
                found: partition.dimension(),
            });
        }
        linalg::cholesky_lower(&d)?;
        let sigma = sigma_z2.sqrt();
        let mut blocks = Vec::with_capacity(partition.len());
        let mut whiteners = Vec::with_capacity(partition.len());
        for i in 0..partition.len() {
            let block = linalg::principal_block(&d, &partition, i)?;
            let l = linalg::cholesky_lower(&block)?;
            let n = block.nrows();
            let l_inv = l
                .as_dmatrix()
                .clone()
                .solve_lower_triangular(&DMatrix::identity(n, n))
                .ok_or(Error::NotPositiveDefinite)?;
            whiteners.push(RealMatrix::new(l_inv * sigma)?);
            blocks.push(block);
        }
        Ok(Self {
            d,
            partition,
            sigma_z2,
            blocks,
            whiteners,
            eigenvalues,
        })
    }

    /// `(1/2) ln(prod det D_i / det D)` in nats; non-negative up to rounding.
    pub fn log_det_correction(&self) -> Result<f64> {
        let blocks: f64 = self
            .blocks
            .iter()
            .map(linalg::log_det)
            .sum::<Result<f64>>()?;
        Ok(0.5 * (blocks - linalg::log_det(&self.d)?))
    }

    /// Paired singular value of each 2x2 whitener (the per-antenna gain).
    pub fn whitener_gains(&self) -> Result<Vec<f64>> {
        self.whiteners
            .iter()
            .map(|m| {
                if m.nrows() != 2 {
                    return Err(Error::Unsupported(format!(
                        "whitener gain needs a 2-dimensional sub-space, got {}",
                        m.nrows()
                    )));
                }
                Ok(linalg::paired_singular_values(m)?[0])
            })
            .collect()
    }
}

pub fn noise_covariance(model: &ChannelModel) -> Result<NoiseCovariance> {
    NoiseCovariance::from_model(model)
}

pub fn log_det_correction(nc: &NoiseCovariance) -> Result<f64> {
    nc.log_det_correction()
}

fn symmetrize(d: DMatrix<f64>) -> RealMatrix {
    let sym = (&d + d.transpose()) * 0.5;
    RealMatrix::new(sym).expect("finite covariance")
}
