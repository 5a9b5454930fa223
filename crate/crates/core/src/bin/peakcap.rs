use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use peakcap::cli::{self, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use peakcap::channel::load_model;
use peakcap::sweep::{parse_bound_list, parse_snr_spec, SweepConfig};
use peakcap::Result;

#[derive(Parser)]
#[command(name = "peakcap", version, about = "Capacity bounds for amplitude-constrained MIMO channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every bound at the given SNR points
    Bounds {
        #[arg(long)]
        model: PathBuf,
        /// Comma list or start:step:stop in dB (defaults to the model's SNR)
        #[arg(long, allow_hyphen_values = true)]
        snr: Option<String>,
    },
    /// Sweep an SNR range and write CSV
    Sweep {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "-30:1:50")]
        snr: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Columns to fill: any of epi_lb,ub_t1,ub_t2,ub_pa1
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Write a random complex channel file
    GenChannel {
        #[arg(long, default_value_t = 2)]
        n_complex: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// SNR in dB used to set the noise variance
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        snr: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check Monte Carlo achievable rates against the compound bound
    Verify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "-5,5,15,25")]
        snr: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(command: Command) -> Result<i32> {
    let stdout = io::stdout().lock();
    match command {
        Command::Bounds { model, snr } => {
            let model = load_model(model)?;
            let grid = snr.as_deref().map(parse_snr_spec).transpose()?;
            cli::cmd_bounds(&model, grid.as_deref(), stdout)?;
        }
        Command::Sweep {
            model,
            snr,
            out,
            bounds,
        } => {
            let model = load_model(model)?;
            let mut config = SweepConfig::from_spec(&snr)?;
            if let Some(list) = bounds.as_deref() {
                config.bounds = parse_bound_list(list)?;
            }
            config.output = out;
            cli::cmd_sweep(&model, &config, stdout)?;
        }
        Command::GenChannel {
            n_complex,
            seed,
            snr,
            out,
        } => match out {
            Some(path) => {
                let mut buf = Vec::new();
                cli::cmd_gen_channel(n_complex, seed, snr, &mut buf)?;
                std::fs::write(path, buf)?;
            }
            None => cli::cmd_gen_channel(n_complex, seed, snr, stdout)?,
        },
        Command::Verify {
            model,
            snr,
            samples,
            seed,
        } => {
            let model = load_model(model)?;
            let grid = parse_snr_spec(&snr)?;
            if !cli::cmd_verify(&model, &grid, samples, seed, stdout)? {
                return Ok(EXIT_VIOLATION);
            }
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(parsed.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
