//! Independent checks on the bounds.
//!
//! Achievable rates of finite constellations (estimated by Monte Carlo) must
//! never exceed a valid upper bound, and a bisection water-filler provides a
//! second route to the allocation used by the water-filling bound.

mod constellation;
mod mi;

pub use constellation::{
    default_constellation, per_antenna_constellation, Constellation, MAX_CONSTELLATION_POINTS,
};
pub use mi::{mc_mutual_information, MiEstimate, BATCH_SIZE, MIN_SAMPLES};

use crate::bounds::{validate_waterfill_input, WaterfillAllocation};
use crate::error::Result;

const BISECTION_STEPS: usize = 200;

/// Water level by bisection on `[min n, max n + budget]`.
pub fn waterfill_bisection_oracle(noise_vars: &[f64], budget: f64) -> Result<WaterfillAllocation> {
    validate_waterfill_input(noise_vars, budget)?;
    let filled = |mu: f64| -> f64 { noise_vars.iter().map(|&n| (mu - n).max(0.0)).sum() };
    let mut lo = noise_vars.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = noise_vars.iter().copied().fold(f64::NEG_INFINITY, f64::max) + budget;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if filled(mid) < budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let water_level = 0.5 * (lo + hi);
    Ok(WaterfillAllocation {
        powers: noise_vars.iter().map(|&n| (water_level - n).max(0.0)).collect(),
        water_level,
        budget,
    })
}
