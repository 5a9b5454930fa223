use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Ball,
    Box,
}

/// One factor of a Cartesian constraint region.
///
/// `radius` is always the largest norm attained inside the region. For a box
/// that is the circumscribed radius, so the side length is `2 R / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubRegion {
    pub dim: usize,
    pub shape: Shape,
    pub radius: f64,
}

impl SubRegion {
    pub fn new(dim: usize, shape: Shape, radius: f64) -> Result<Self> {
        let region = Self { dim, shape, radius };
        region.validate()?;
        Ok(region)
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Self::new(dim, Shape::Ball, radius)
    }

    pub fn cube(dim: usize, radius: f64) -> Result<Self> {
        Self::new(dim, Shape::Box, radius)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidArgument("sub-region dimension must be positive".into()));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sub-region radius must be positive and finite, got {}",
                self.radius
            )));
        }
        Ok(())
    }

    /// Side length of the box; for a ball, the diameter.
    pub fn side(&self) -> f64 {
        match self.shape {
            Shape::Ball => 2.0 * self.radius,
            Shape::Box => 2.0 * self.radius / (self.dim as f64).sqrt(),
        }
    }

    pub fn log_volume(&self) -> f64 {
        let n = self.dim as f64;
        match self.shape {
            Shape::Ball => log_unit_ball_volume(self.dim) + n * self.radius.ln(),
            Shape::Box => n * self.side().ln(),
        }
    }

    pub fn volume(&self) -> f64 {
        self.log_volume().exp()
    }

    /// True when the point (of length `dim`) lies in the closed region.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim {
            return false;
        }
        match self.shape {
            Shape::Ball => x.iter().map(|v| v * v).sum::<f64>().sqrt() <= self.radius + tol,
            Shape::Box => x.iter().all(|v| v.abs() <= 0.5 * self.side() + tol),
        }
    }

    pub fn with_radius(self, radius: f64) -> Self {
        Self { radius, ..self }
    }

    pub fn is_disc(&self) -> bool {
        self.dim == 2 && self.shape == Shape::Ball
    }
}

/// `ln(pi^{n/2} / Gamma(n/2 + 1))` via the two-step recursion `V_n = V_{n-2} 2 pi / n`.
fn log_unit_ball_volume(n: usize) -> f64 {
    let mut log_v = if n % 2 == 0 { 0.0 } else { 2f64.ln() };
    let mut k = if n % 2 == 0 { 2 } else { 3 };
    while k <= n {
        log_v += (2.0 * PI / k as f64).ln();
        k += 2;
    }
    log_v
}

/// Ordered Cartesian product of sub-regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstraintRegion {
    subregions: Vec<SubRegion>,
}

impl ConstraintRegion {
    pub fn new(subregions: Vec<SubRegion>) -> Result<Self> {
        if subregions.is_empty() {
            return Err(Error::InvalidPartition("constraint region has no sub-regions".into()));
        }
        for s in &subregions {
            s.validate()?;
        }
        Ok(Self { subregions })
    }

    /// `k` discs of radius `radius`: one amplitude limit per complex antenna.
    pub fn per_antenna(k: usize, radius: f64) -> Result<Self> {
        Self::new(
            (0..k)
                .map(|_| SubRegion::ball(2, radius))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn subregions(&self) -> &[SubRegion] {
        &self.subregions
    }

    pub fn len(&self) -> usize {
        self.subregions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subregions.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.subregions.iter().map(|s| s.dim).sum()
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.subregions.iter().map(|s| s.dim).collect())
            .expect("validated sub-regions form a partition")
    }

    pub fn radii(&self) -> Vec<f64> {
        self.subregions.iter().map(|s| s.radius).collect()
    }

    /// Radius shared by all sub-regions after normalization (the first one's).
    pub fn common_radius(&self) -> f64 {
        self.subregions[0].radius
    }

    pub fn is_normalized(&self) -> bool {
        let r = self.common_radius();
        self.subregions.iter().all(|s| s.radius == r)
    }

    pub fn is_per_antenna(&self) -> bool {
        self.subregions.iter().all(SubRegion::is_disc)
    }

    pub fn log_volume(&self) -> f64 {
        self.subregions.iter().map(SubRegion::log_volume).sum()
    }

    pub fn volume(&self) -> f64 {
        self.subregions.iter().map(SubRegion::volume).product()
    }

    /// Largest norm attained anywhere in the product region.
    pub fn sup_norm(&self) -> f64 {
        self.subregions
            .iter()
            .map(|s| s.radius * s.radius)
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dimension() {
            return false;
        }
        let mut start = 0;
        self.subregions.iter().all(|s| {
            let inside = s.contains(&x[start..start + s.dim], tol);
            start += s.dim;
            inside
        })
    }

    pub(crate) fn with_radii(&self, radius: f64) -> Self {
        Self {
            subregions: self.subregions.iter().map(|s| s.with_radius(radius)).collect(),
        }
    }
}

/// Volume of a constraint region (product of its sub-region volumes).
pub fn volume(region: &ConstraintRegion) -> f64 {
    region.volume()
}
