use crate::error::{Error, Result};

/// Power split over parallel Gaussian channels.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillAllocation {
    /// Powers in the order of the input noise variances.
    pub powers: Vec<f64>,
    pub water_level: f64,
    pub budget: f64,
}

impl WaterfillAllocation {
    /// Checks `sum P = budget` and the complementary-slackness conditions.
    pub fn satisfies_kkt(&self, noise_vars: &[f64], tol: f64) -> bool {
        let total: f64 = self.powers.iter().sum();
        if (total - self.budget).abs() > tol * self.budget.max(1.0) {
            return false;
        }
        let scale = self.water_level.abs().max(1.0);
        self.powers.iter().zip(noise_vars).all(|(&p, &n)| {
            if p < 0.0 {
                false
            } else if p > 0.0 {
                (p + n - self.water_level).abs() <= tol * scale
            } else {
                n >= self.water_level - tol * scale
            }
        })
    }
}

pub(crate) fn validate(noise_vars: &[f64], budget: f64) -> Result<()> {
    if noise_vars.is_empty() {
        return Err(Error::InvalidArgument("no channels to allocate over".into()));
    }
    if !(budget.is_finite() && budget > 0.0) {
        return Err(Error::InvalidArgument(format!("budget must be positive, got {budget}")));
    }
    if noise_vars.iter().any(|n| !(n.is_finite() && *n > 0.0)) {
        return Err(Error::InvalidArgument("noise variances must be positive".into()));
    }
    Ok(())
}

/// Exact water-filling: `P_i = max(mu - n_i, 0)` with `sum P_i = budget`.
///
/// Sorts the noise levels, then finds the largest active set whose water
/// level stays above its weakest member.
pub fn waterfill(noise_vars: &[f64], budget: f64) -> Result<WaterfillAllocation> {
    validate(noise_vars, budget)?;
    let mut sorted = noise_vars.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mut prefix = 0.0;
    let mut water_level = sorted[0] + budget;
    for (k, &n) in sorted.iter().enumerate() {
        prefix += n;
        let level = (budget + prefix) / (k + 1) as f64;
        if level > n {
            water_level = level;
        } else {
            break;
        }
    }
    let powers = noise_vars
        .iter()
        .map(|&n| (water_level - n).max(0.0))
        .collect();
    Ok(WaterfillAllocation {
        powers,
        water_level,
        budget,
    })
}
