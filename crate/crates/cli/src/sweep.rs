//! `tmsv sweep` — grid evaluation of separability and entanglement
//! diagnostics along one parameter, emitted as CSV.
//!
//! Columns: the swept parameter, the Simon margin, the separability
//! verdict, the entanglement estimate, and the estimate normalized to its
//! value before propagation. Squeezing sweeps append the degradation
//! length. Quantities undefined at a row (amplifying devices, thermal
//! reservoirs, vacuum input) are emitted as `NaN` with a warning on
//! stderr; the CSV grid stays rectangular either way.

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use tmsv_core::channel::{propagate_covariance, DeviceParams};
use tmsv_core::entanglement::{degradation_length, estimate_upper_bound, tmsv_entanglement};
use tmsv_core::gaussian::{tmsv_covariance, SqueezeSpec};
use tmsv_core::separability::simon_criterion;

use crate::emit::csv_float;
use crate::{usage_error, SqueezeArgs};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Parameter {
    /// Propagation length through absorbing fibers.
    Length,
    /// Excess gain |T|^2 - 1 of amplifying devices.
    Gain,
    /// Thermal occupation of the device reservoirs.
    Nth,
    /// Input brightness, swept as mean photon number per mode.
    Squeezing,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Which parameter to sweep.
    #[arg(long, value_enum)]
    parameter: Parameter,
    /// First grid value (inclusive).
    #[arg(long)]
    start: f64,
    /// Last grid value (inclusive).
    #[arg(long)]
    stop: f64,
    /// Number of grid points (>= 2).
    #[arg(long)]
    steps: usize,

    #[command(flatten)]
    squeeze: SqueezeArgs,

    /// Thermal reservoir occupation held fixed during the sweep.
    #[arg(long, default_value_t = 0.0)]
    nth: f64,
    /// Absorption length l_A.
    #[arg(long, default_value_t = 1.0)]
    la: f64,
    /// Fixed propagation length (squeezing sweeps).
    #[arg(long, default_value_t = 0.0)]
    length: f64,
    /// Fixed amplitude transmission magnitude |T| (n_th sweeps).
    #[arg(long)]
    t: Option<f64>,
    /// Amplitude reflection magnitude |R|.
    #[arg(long, default_value_t = 0.0)]
    r: f64,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Simon margin of the squeezed vacuum after two equal devices.
fn margin_after(spec: &SqueezeSpec, device: &DeviceParams) -> anyhow::Result<f64> {
    let out = propagate_covariance(&tmsv_covariance(spec), device, device)?;
    Ok(simon_criterion(&out).margin)
}

/// Estimate of the surviving entanglement, defined only for attenuators at
/// zero reservoir temperature.
fn estimate_if_defined(spec: &SqueezeSpec, t: f64, n_th: f64) -> Option<f64> {
    if n_th == 0.0 && t <= 1.0 {
        Some(
            estimate_upper_bound(spec, real(t), real(t))
                .expect("attenuator parameters are validated")
                .value,
        )
    } else {
        None
    }
}

pub fn run(args: &SweepArgs) -> anyhow::Result<()> {
    if !(args.start.is_finite() && args.stop.is_finite() && args.start < args.stop) {
        usage_error("sweep requires finite --start < --stop");
    }
    if args.steps < 2 {
        usage_error("sweep requires --steps >= 2");
    }
    if args.parameter == Parameter::Squeezing {
        if args.squeeze.given() {
            usage_error("a squeezing sweep fixes the input itself; drop --zeta/--q/--mean-n");
        }
    } else if !args.squeeze.given() {
        usage_error("this sweep needs a fixed input: give --zeta, --q, or --mean-n");
    }

    let grid: Vec<f64> = (0..args.steps)
        .map(|i| args.start + (args.stop - args.start) * i as f64 / (args.steps - 1) as f64)
        .collect();

    match args.parameter {
        Parameter::Length => sweep_length(args, &grid),
        Parameter::Gain => sweep_gain(args, &grid),
        Parameter::Nth => sweep_nth(args, &grid),
        Parameter::Squeezing => sweep_squeezing(args, &grid),
    }
}

fn sweep_length(args: &SweepArgs, grid: &[f64]) -> anyhow::Result<()> {
    let spec = args.squeeze.resolve()?;
    let initial = if spec.q() > 0.0 {
        Some(tmsv_entanglement(spec.q())?)
    } else {
        None
    };
    if args.nth > 0.0 {
        eprintln!(
            "warning: the entanglement estimate assumes zero-temperature fibers; \
             emitting NaN for n_th = {}",
            args.nth
        );
    }
    println!("length,simon_margin,separable,entanglement_estimate,estimate_ratio");
    for &l in grid {
        let t = (-l / args.la).exp();
        let device = DeviceParams::absorbing(real(t), real(0.0), args.nth)?;
        let margin = margin_after(&spec, &device)?;
        let estimate = estimate_if_defined(&spec, t, args.nth);
        let ratio = match (estimate, initial) {
            (Some(e), Some(e0)) => e / e0,
            _ => {
                if estimate.is_some() && initial.is_none() {
                    eprintln!(
                        "warning: vacuum input has no initial entanglement; \
                         ratio is NaN at length = {l}"
                    );
                }
                f64::NAN
            }
        };
        emit_row(l, margin, estimate.unwrap_or(f64::NAN), ratio, None);
    }
    Ok(())
}

fn sweep_gain(args: &SweepArgs, grid: &[f64]) -> anyhow::Result<()> {
    if args.start < 0.0 {
        usage_error("a gain sweep requires --start >= 0 (excess gain |T|^2 - 1)");
    }
    let spec = args.squeeze.resolve()?;
    eprintln!(
        "warning: the entanglement estimate is undefined for amplifying devices; \
         emitting NaN"
    );
    println!("gain,simon_margin,separable,entanglement_estimate,estimate_ratio");
    for &g in grid {
        let t = (1.0 + g).sqrt();
        let device = DeviceParams::amplifying(real(t), real(args.r), args.nth)?;
        let margin = margin_after(&spec, &device)?;
        emit_row(g, margin, f64::NAN, f64::NAN, None);
    }
    Ok(())
}

fn sweep_nth(args: &SweepArgs, grid: &[f64]) -> anyhow::Result<()> {
    let spec = args.squeeze.resolve()?;
    let t = args
        .t
        .unwrap_or_else(|| usage_error("an n_th sweep requires a fixed --t"));
    let initial = if spec.q() > 0.0 {
        Some(tmsv_entanglement(spec.q())?)
    } else {
        None
    };
    let mut warned = false;
    println!("n_th,simon_margin,separable,entanglement_estimate,estimate_ratio");
    for &n_th in grid {
        let device = DeviceParams::absorbing(real(t), real(args.r), n_th)?;
        let margin = margin_after(&spec, &device)?;
        let estimate = estimate_if_defined(&spec, t, n_th);
        if estimate.is_none() && !warned {
            eprintln!(
                "warning: the entanglement estimate assumes zero reservoir temperature; \
                 emitting NaN for n_th > 0"
            );
            warned = true;
        }
        let ratio = match (estimate, initial) {
            (Some(e), Some(e0)) => e / e0,
            _ => f64::NAN,
        };
        emit_row(n_th, margin, estimate.unwrap_or(f64::NAN), ratio, None);
    }
    Ok(())
}

fn sweep_squeezing(args: &SweepArgs, grid: &[f64]) -> anyhow::Result<()> {
    if args.start < 0.0 {
        usage_error("mean photon numbers are non-negative");
    }
    if args.nth > 0.0 {
        eprintln!(
            "warning: the entanglement estimate assumes zero-temperature fibers; \
             emitting NaN for n_th = {}",
            args.nth
        );
    }
    let t = (-args.length / args.la).exp();
    println!(
        "mean_photons,simon_margin,separable,entanglement_estimate,estimate_ratio,degradation_length"
    );
    for &mean in grid {
        let spec = SqueezeSpec::from_mean_photons(mean)?;
        let device = DeviceParams::absorbing(real(t), real(0.0), args.nth)?;
        let margin = margin_after(&spec, &device)?;
        let estimate = estimate_if_defined(&spec, t, args.nth);
        let ratio = if spec.q() > 0.0 {
            match estimate {
                Some(e) => e / tmsv_entanglement(spec.q())?,
                None => f64::NAN,
            }
        } else {
            eprintln!(
                "warning: vacuum input has no initial entanglement; \
                 ratio is NaN at mean_photons = {mean}"
            );
            f64::NAN
        };
        let l_e = match degradation_length(&spec, args.la) {
            Ok(l) => l,
            Err(_) => {
                eprintln!(
                    "warning: degradation length undefined at mean_photons = {mean}; \
                     emitting NaN"
                );
                f64::NAN
            }
        };
        emit_row(mean, margin, estimate.unwrap_or(f64::NAN), ratio, Some(l_e));
    }
    Ok(())
}

fn emit_row(swept: f64, margin: f64, estimate: f64, ratio: f64, extra: Option<f64>) {
    let separable = margin >= 0.0;
    let mut row = format!(
        "{},{},{separable},{},{}",
        csv_float(swept),
        csv_float(margin),
        csv_float(estimate),
        csv_float(ratio)
    );
    if let Some(extra) = extra {
        row.push(',');
        row.push_str(&csv_float(extra));
    }
    println!("{row}");
}
