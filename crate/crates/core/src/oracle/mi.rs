use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::Constellation;
use crate::bounds::to_bits;
use crate::channel::ChannelModel;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 1_000;

/// Samples per RNG stream. Batches are independent streams of one seed, so
/// the estimate does not depend on how batches are scheduled.
pub const BATCH_SIZE: usize = 2_048;

/// Mixture terms this far below the largest exponent are dropped.
const LOG_CUTOFF: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    pub value_bits: f64,
    pub std_error_bits: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Monte Carlo estimate of `I(X; H X + sigma Z)` for a finite input.
///
/// Each sample draws `x_k` and `z`, then scores
/// `ln p(y | x_k) - ln sum_j p_j p(y | x_j)`; the mean of these scores is
/// the mutual information.
pub fn mc_mutual_information(
    model: &ChannelModel,
    constellation: &Constellation,
    samples: usize,
    seed: u64,
) -> Result<MiEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let n = model.dimension();
    if constellation.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: constellation.dimension(),
        });
    }
    if let Some(p) = constellation
        .points()
        .iter()
        .find(|p| !model.region().contains(p, 1e-9))
    {
        return Err(Error::InvalidArgument(format!(
            "constellation point {p:?} lies outside the constraint region"
        )));
    }

    let h = model.h().as_dmatrix();
    let images: Vec<f64> = constellation
        .points()
        .iter()
        .flat_map(|x| {
            let y = h * nalgebra::DVector::from_column_slice(x);
            y.iter().copied().collect::<Vec<_>>()
        })
        .collect();
    let picker = WeightedIndex::new(constellation.probabilities())
        .map_err(|e| Error::InvalidArgument(format!("bad probabilities: {e}")))?;
    let ctx = Sampler {
        n,
        sigma: model.sigma_z(),
        images: &images,
        probabilities: constellation.probabilities(),
        picker: &picker,
    };

    let batches = samples.div_ceil(BATCH_SIZE);
    let partials: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = BATCH_SIZE.min(samples - b * BATCH_SIZE);
            ctx.run_batch(seed, b as u64, count)
        })
        .collect();

    let (sum, sum_sq) = partials
        .iter()
        .fold((0.0, 0.0), |(s, q), (bs, bq)| (s + bs, q + bq));
    let count = samples as f64;
    let mean = sum / count;
    let var = ((sum_sq / count - mean * mean) * count / (count - 1.0)).max(0.0);
    Ok(MiEstimate {
        value_bits: to_bits(mean),
        std_error_bits: to_bits((var / count).sqrt()),
        samples,
        seed,
    })
}

struct Sampler<'a> {
    n: usize,
    sigma: f64,
    images: &'a [f64],
    probabilities: &'a [f64],
    picker: &'a WeightedIndex<f64>,
}

impl Sampler<'_> {
    fn run_batch(&self, seed: u64, stream: u64, count: usize) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let m = self.probabilities.len();
        let inv_two_var = 0.5 / (self.sigma * self.sigma);
        let mut noise = vec![0.0; self.n];
        let mut exponents = vec![0.0; m];
        let (mut sum, mut sum_sq) = (0.0, 0.0);

        for _ in 0..count {
            let k = self.picker.sample(&mut rng);
            for w in noise.iter_mut() {
                let z: f64 = StandardNormal.sample(&mut rng);
                *w = self.sigma * z;
            }
            let sent = &self.images[k * self.n..(k + 1) * self.n];
            let mut max_e = f64::NEG_INFINITY;
            for (j, img) in self.images.chunks_exact(self.n).enumerate() {
                let mut d2 = 0.0;
                for ((s, t), w) in sent.iter().zip(img).zip(&noise) {
                    let d = (s - t) + w;
                    d2 += d * d;
                }
                let e = -d2 * inv_two_var;
                exponents[j] = e;
                if e > max_e && self.probabilities[j] > 0.0 {
                    max_e = e;
                }
            }
            let mut mix = 0.0;
            for (e, p) in exponents.iter().zip(self.probabilities) {
                let shifted = e - max_e;
                if shifted > -LOG_CUTOFF {
                    mix += p * shifted.exp();
                }
            }
            let score = exponents[k] - (max_e + mix.ln());
            sum += score;
            sum_sq += score * score;
        }
        (sum, sum_sq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ConstraintRegion, SubRegion};
    use crate::linalg::RealMatrix;

    fn scalar_model(amplitude: f64, sigma_z2: f64) -> ChannelModel {
        let region = ConstraintRegion::new(vec![SubRegion::ball(1, amplitude).unwrap()]).unwrap();
        ChannelModel::new(RealMatrix::identity(1), sigma_z2, region).unwrap()
    }

    #[test]
    fn single_point_carries_no_information() {
        let m = scalar_model(1.0, 0.3);
        let c = Constellation::uniform(vec![vec![0.5]]).unwrap();
        let est = mc_mutual_information(&m, &c, 5_000, 3).unwrap();
        assert_eq!(est.value_bits, 0.0);
        assert_eq!(est.std_error_bits, 0.0);
    }

    #[test]
    fn antipodal_high_snr_is_one_bit() {
        let m = scalar_model(1.0, 1e-3);
        let c = Constellation::uniform(vec![vec![-1.0], vec![1.0]]).unwrap();
        let est = mc_mutual_information(&m, &c, 10_000, 1).unwrap();
        assert!((est.value_bits - 1.0).abs() < 1e-9, "{est:?}");
    }

    #[test]
    fn deterministic_given_seed() {
        let m = scalar_model(1.0, 0.5);
        let c = Constellation::uniform(vec![vec![-1.0], vec![0.0], vec![1.0]]).unwrap();
        let a = mc_mutual_information(&m, &c, 5_000, 9).unwrap();
        let b = mc_mutual_information(&m, &c, 5_000, 9).unwrap();
        let d = mc_mutual_information(&m, &c, 5_000, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.value_bits, d.value_bits);
        assert_eq!(a.seed, 9);
    }

    #[test]
    fn rejects_too_few_samples() {
        let m = scalar_model(1.0, 0.5);
        let c = Constellation::uniform(vec![vec![-1.0], vec![1.0]]).unwrap();
        assert!(mc_mutual_information(&m, &c, 999, 0).is_err());
    }

    #[test]
    fn rejects_points_outside_region() {
        let m = scalar_model(1.0, 0.5);
        let c = Constellation::uniform(vec![vec![-2.0], vec![1.0]]).unwrap();
        assert!(mc_mutual_information(&m, &c, 1_000, 0).is_err());
    }

    #[test]
    fn std_error_shrinks_like_root_n() {
        let m = scalar_model(1.0, 0.4);
        let c = Constellation::uniform(vec![vec![-1.0], vec![1.0]]).unwrap();
        let mut ratios = Vec::new();
        for seed in 0..5 {
            let a = mc_mutual_information(&m, &c, 20_000, seed).unwrap();
            let b = mc_mutual_information(&m, &c, 40_000, seed + 100).unwrap();
            ratios.push(b.std_error_bits / a.std_error_bits);
        }
        let target = std::f64::consts::FRAC_1_SQRT_2;
        for r in ratios {
            assert!((r - target).abs() / target < 0.2, "ratio {r}");
        }
    }
}
