//! Bounds for the two-antenna reference channel from -10 to 40 dB, as CSV.
//!
//! `cargo run --example reference_sweep > reference.csv`

use std::io;

use peakcap::bounds::NoiseCovariance;
use peakcap::channel::reference_model;
use peakcap::sweep::{snr_range, sweep, write_csv, SELECTABLE};

fn main() -> peakcap::Result<()> {
    let model = reference_model(0.0)?;
    let gains = NoiseCovariance::from_model(&model)?.whitener_gains()?;
    eprintln!("whitener gains: {gains:?}");
    let rows = sweep(&model, &snr_range(-10.0, 1.0, 40.0)?)?;
    write_csv(&rows, &SELECTABLE, io::stdout().lock())
}
