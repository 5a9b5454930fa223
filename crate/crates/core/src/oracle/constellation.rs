use std::f64::consts::PI;

use crate::channel::ChannelModel;
use crate::error::{Error, Result};

pub const MAX_CONSTELLATION_POINTS: u128 = 1_000_000;

/// Finite input distribution inside a constraint region.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<Vec<f64>>,
    probabilities: Vec<f64>,
}

impl Constellation {
    pub fn new(points: Vec<Vec<f64>>, probabilities: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != probabilities.len() {
            return Err(Error::InvalidArgument(
                "constellation needs one probability per point".into(),
            ));
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim || p.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidArgument("constellation points must share a dimension".into()));
        }
        if probabilities.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidArgument("probabilities must be non-negative".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self {
            points,
            probabilities,
        })
    }

    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let p = 1.0 / points.len().max(1) as f64;
        let n = points.len();
        Self::new(points, vec![p; n])
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points[0].len()
    }
}

/// Product over antennas of a ring/phase grid; ring `r` of `rings` has
/// radius `R_i r / rings` and carries `phases` equally spaced points.
pub fn per_antenna_constellation(
    model: &ChannelModel,
    rings: usize,
    phases: usize,
) -> Result<Constellation> {
    let region = model.region();
    if !region.is_per_antenna() {
        return Err(Error::Unsupported(
            "ring constellation needs one disc per antenna".into(),
        ));
    }
    if rings == 0 {
        return Err(Error::InvalidArgument("need at least one ring".into()));
    }
    if phases < 2 {
        return Err(Error::InvalidArgument("need at least two phases".into()));
    }
    let per_antenna = (rings * phases) as u128;
    let total = (0..region.len()).try_fold(1u128, |acc, _| {
        acc.checked_mul(per_antenna)
            .filter(|&t| t <= MAX_CONSTELLATION_POINTS)
    });
    let total = match total {
        Some(t) => t as usize,
        None => {
            return Err(Error::ConstellationTooLarge(
                per_antenna.saturating_pow(region.len() as u32),
            ))
        }
    };

    let grids: Vec<Vec<[f64; 2]>> = region
        .subregions()
        .iter()
        .map(|s| {
            (1..=rings)
                .flat_map(|r| {
                    let radius = s.radius * r as f64 / rings as f64;
                    (0..phases).map(move |p| {
                        let theta = 2.0 * PI * p as f64 / phases as f64;
                        [radius * theta.cos(), radius * theta.sin()]
                    })
                })
                .collect()
        })
        .collect();

    let mut points = Vec::with_capacity(total);
    for mut index in 0..total {
        let mut x = Vec::with_capacity(2 * grids.len());
        for grid in &grids {
            let p = grid[index % grid.len()];
            index /= grid.len();
            x.extend_from_slice(&p);
        }
        points.push(x);
    }
    Constellation::uniform(points)
}

/// Ring count `max(1, floor(R / (2 sigma)))` capped at 4, with 8 phases.
pub fn default_constellation(model: &ChannelModel) -> Result<Constellation> {
    let r = model.region().common_radius();
    let rings = ((r / (2.0 * model.sigma_z())).floor() as usize).clamp(1, 4);
    per_antenna_constellation(model, rings, 8)
}
