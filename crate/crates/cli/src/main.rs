//! `tmsv` — thresholds, states, and entanglement estimates for two-mode
//! squeezed vacuum light sent through absorbing or amplifying four-ports.
//!
//! Machine-readable output only: single results as JSON on stdout, sweeps
//! as CSV on stdout, warnings on stderr. Every float is printed with 17
//! significant digits so parsing the output reproduces the exact binary
//! values.

mod emit;
mod state;
mod sweep;
mod threshold;
mod verify;

use clap::{Args, Parser, Subcommand};
use tmsv_core::gaussian::SqueezeSpec;

#[derive(Parser)]
#[command(
    name = "tmsv",
    version,
    about = "Two-mode squeezed vacuum transmission: separability thresholds, \
             Fock-basis output states, and surviving-entanglement estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form separability boundaries (JSON).
    Threshold(threshold::ThresholdArgs),
    /// Sweep one parameter and emit per-step diagnostics (CSV).
    Sweep(sweep::SweepArgs),
    /// Exact Fock-basis output density matrix (JSON).
    State(state::StateArgs),
    /// Cross-check analytic routes against the numerical oracle.
    #[command(hide = true)]
    Verify(verify::VerifyArgs),
}

/// Input squeezing, given as exactly one of three equivalent parameters.
#[derive(Args)]
#[group(multiple = false)]
pub struct SqueezeArgs {
    /// Squeezing parameter zeta (>= 0).
    #[arg(long)]
    pub zeta: Option<f64>,
    /// Schmidt parameter q = tanh(zeta), in [0, 1).
    #[arg(long)]
    pub q: Option<f64>,
    /// Mean photon number per mode, sinh^2(zeta).
    #[arg(long = "mean-n")]
    pub mean_n: Option<f64>,
}

impl SqueezeArgs {
    pub fn given(&self) -> bool {
        self.zeta.is_some() || self.q.is_some() || self.mean_n.is_some()
    }

    /// Build the squeeze parameters, or exit with a usage error when no
    /// squeezing flag was supplied.
    pub fn resolve(&self) -> anyhow::Result<SqueezeSpec> {
        let spec = if let Some(zeta) = self.zeta {
            SqueezeSpec::from_zeta(zeta)
        } else if let Some(q) = self.q {
            SqueezeSpec::from_q(q)
        } else if let Some(mean) = self.mean_n {
            SqueezeSpec::from_mean_photons(mean)
        } else {
            usage_error("one of --zeta, --q, --mean-n is required");
        };
        Ok(spec?)
    }
}

/// Report a flag-combination problem and exit with the usage status.
pub fn usage_error(message: &str) -> ! {
    eprintln!("error: {message}");
    std::process::exit(2);
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Threshold(args) => threshold::run(&args),
        Command::Sweep(args) => sweep::run(&args),
        Command::State(args) => state::run(&args),
        Command::Verify(args) => verify::run(&args),
    };
    if let Err(error) = result {
        eprintln!("error: {error:#}");
        std::process::exit(1);
    }
}
