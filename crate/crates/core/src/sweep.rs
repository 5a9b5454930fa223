//! SNR grids and the CSV table of bounds.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::bounds::{evaluate, BoundKind, BoundReport};
use crate::channel::ChannelModel;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "snr_db,epi_lb,ub_t1,ub_t2,ub_pa1,compound_ub,correction,gap_bits";

/// Bounds that may be selected for the individual CSV columns.
pub const SELECTABLE: [BoundKind; 4] = [
    BoundKind::EntropyPower,
    BoundKind::SubspaceSum,
    BoundKind::Waterfilling,
    BoundKind::PerAntenna,
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    pub bounds: Vec<BoundKind>,
    pub output: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            snr_start_db: -30.0,
            snr_stop_db: 50.0,
            snr_step_db: 1.0,
            bounds: SELECTABLE.to_vec(),
            output: None,
        }
    }
}

impl SweepConfig {
    /// Config from `start:step:stop` or a single value.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad SNR value '{s}'")))
        };
        let (start, step, stop) = match parts.as_slice() {
            [start, step, stop] => (num(start)?, num(step)?, num(stop)?),
            [single] => (num(single)?, 1.0, num(single)?),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "sweep needs start:step:stop, got '{spec}'"
                )))
            }
        };
        let config = Self {
            snr_start_db: start,
            snr_stop_db: stop,
            snr_step_db: step,
            ..Self::default()
        };
        config.grid()?;
        Ok(config)
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        snr_range(self.snr_start_db, self.snr_step_db, self.snr_stop_db)
    }
}

/// Inclusive grid `start, start + step, ...` up to `stop`.
pub fn snr_range(start: f64, step: f64, stop: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && step.is_finite() && stop.is_finite()) {
        return Err(Error::InvalidArgument("SNR range must be finite".into()));
    }
    if step <= 0.0 {
        return Err(Error::InvalidArgument(format!("SNR step must be positive, got {step}")));
    }
    if start > stop {
        return Err(Error::InvalidArgument(format!(
            "SNR start {start} exceeds stop {stop}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

/// Parses `a,b,c`, a single value, or `start:step:stop`.
pub fn parse_snr_spec(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("bad SNR value '{s}'")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => snr_range(num(start)?, num(step)?, num(stop)?),
        [_] => {
            let values = spec.split(',').map(num).collect::<Result<Vec<_>>>()?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("SNR values must be finite".into()));
            }
            Ok(values)
        }
        _ => Err(Error::InvalidArgument(format!(
            "SNR spec '{spec}' is neither a list nor start:step:stop"
        ))),
    }
}

pub fn parse_bound_list(list: &str) -> Result<Vec<BoundKind>> {
    let kinds = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse::<BoundKind>)
        .collect::<Result<Vec<_>>>()?;
    if let Some(k) = kinds.iter().find(|k| !SELECTABLE.contains(k)) {
        return Err(Error::InvalidArgument(format!(
            "'{k}' is not a selectable column (use epi_lb, ub_t1, ub_t2, ub_pa1)"
        )));
    }
    Ok(kinds)
}

/// Evaluates every bound at each SNR; rows come back in grid order.
pub fn sweep(model: &ChannelModel, grid: &[f64]) -> Result<Vec<BoundReport>> {
    grid.par_iter()
        .map(|&snr| evaluate(&model.with_snr_db(snr)?))
        .collect()
}

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_row(report: &BoundReport, selected: &[BoundKind]) -> String {
    let mut fields = vec![format!("{}", report.snr_db)];
    for kind in SELECTABLE {
        let cell = if selected.contains(&kind) {
            report
                .get(kind)
                .map(|b| format_value(b.value_bits))
                .unwrap_or_default()
        } else {
            String::new()
        };
        fields.push(cell);
    }
    fields.push(format_value(report.compound.value_bits));
    fields.push(format_value(report.correction_bits));
    fields.push(format_value(report.gap_bits()));
    fields.join(",")
}

pub fn write_csv<W: Write>(
    rows: &[BoundReport],
    selected: &[BoundKind],
    mut out: W,
) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", csv_row(row, selected))?;
    }
    Ok(())
}
