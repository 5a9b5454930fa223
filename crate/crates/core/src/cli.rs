//! Command implementations behind the `peakcap` binary.
//!
//! Each command writes to a caller-supplied writer so it can be driven from
//! tests; the binary only parses arguments and maps errors to exit codes.

use std::fs;
use std::io::Write;

use crate::bounds::{evaluate, BoundKind};
use crate::channel::{self, ChannelFile, ChannelModel, ConstraintRegion};
use crate::error::{Error, Result};
use crate::oracle::{default_constellation, mc_mutual_information, MIN_SAMPLES};
use crate::sweep::{self, format_value, SweepConfig, SELECTABLE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    if err.is_numeric() {
        EXIT_NUMERIC
    } else {
        EXIT_USAGE
    }
}

/// One CSV row per SNR (the model's own SNR when `snrs` is `None`).
pub fn cmd_bounds<W: Write>(model: &ChannelModel, snrs: Option<&[f64]>, out: W) -> Result<()> {
    let rows = match snrs {
        Some(grid) => sweep::sweep(model, grid)?,
        None => vec![evaluate(model)?],
    };
    let mut buf = Vec::new();
    sweep::write_csv(&rows, &SELECTABLE, &mut buf)?;
    write_all(out, &buf)
}

pub fn cmd_sweep<W: Write>(model: &ChannelModel, config: &SweepConfig, out: W) -> Result<()> {
    let rows = sweep::sweep(model, &config.grid()?)?;
    let mut buf = Vec::new();
    sweep::write_csv(&rows, &config.bounds, &mut buf)?;
    match &config.output {
        Some(path) => Ok(fs::write(path, buf)?),
        None => write_all(out, &buf),
    }
}

/// Random `CN(0,1)` channel with one unit disc per antenna, noise set for
/// `snr_db`.
pub fn gen_channel_file(n_complex: usize, seed: u64, snr_db: f64) -> Result<ChannelFile> {
    let hc = channel::random_channel(n_complex, seed)?;
    let region = ConstraintRegion::per_antenna(n_complex, 1.0)?;
    let sigma_z2 = channel::sigma_for_snr(&region, snr_db)?;
    Ok(ChannelFile::from_complex(
        &hc,
        sigma_z2,
        region.subregions().to_vec(),
    ))
}

pub fn cmd_gen_channel<W: Write>(n_complex: usize, seed: u64, snr_db: f64, out: W) -> Result<()> {
    let text = gen_channel_file(n_complex, seed, snr_db)?.to_string()?;
    write_all(out, text.as_bytes())
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub snr_db: f64,
    pub estimate_bits: f64,
    pub std_error_bits: f64,
    pub compound_ub_bits: f64,
    pub ok: bool,
}

pub const VERIFY_HEADER: &str = "snr_db,estimate_bits,std_error_bits,compound_ub,status";

/// Monte Carlo achievable rate against the compound bound at each SNR.
pub fn verify(model: &ChannelModel, snrs: &[f64], samples: usize, seed: u64) -> Result<Vec<VerifyRow>> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    snrs.iter()
        .map(|&snr| {
            let m = model.with_snr_db(snr)?;
            let constellation = default_constellation(&m)?;
            let est = mc_mutual_information(&m, &constellation, samples, seed)?;
            let ub = evaluate(&m)?.compound.value_bits;
            Ok(VerifyRow {
                snr_db: snr,
                estimate_bits: est.value_bits,
                std_error_bits: est.std_error_bits,
                compound_ub_bits: ub,
                ok: est.value_bits - 3.0 * est.std_error_bits <= ub,
            })
        })
        .collect()
}

/// Writes the verification report; returns `true` when every row passed.
pub fn cmd_verify<W: Write>(
    model: &ChannelModel,
    snrs: &[f64],
    samples: usize,
    seed: u64,
    out: W,
) -> Result<bool> {
    let rows = verify(model, snrs, samples, seed)?;
    let mut buf = Vec::new();
    writeln!(buf, "{VERIFY_HEADER}")?;
    for r in &rows {
        writeln!(
            buf,
            "{},{},{},{},{}",
            r.snr_db,
            format_value(r.estimate_bits),
            format_value(r.std_error_bits),
            format_value(r.compound_ub_bits),
            if r.ok { "OK" } else { "VIOLATION" }
        )?;
    }
    write_all(out, &buf)?;
    Ok(rows.iter().all(|r| r.ok))
}

/// Default column selection when `--bounds` is absent.
pub fn default_bounds() -> Vec<BoundKind> {
    SELECTABLE.to_vec()
}

fn write_all<W: Write>(mut out: W, bytes: &[u8]) -> Result<()> {
    out.write_all(bytes)?;
    out.flush()?;
    Ok(())
}
