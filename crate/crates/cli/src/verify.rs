//! `tmsv verify` (hidden) — pit the analytic routes against the numerical
//! oracle and report the observed deviations as JSON.
//!
//! Four cross-checks run at the given parameters:
//! 1. series-evaluated density matrix vs. beam-splitter dilation,
//! 2. propagated covariance vs. moments recomputed from the density matrix,
//! 3. closed-form entanglement estimate vs. explicit decomposition,
//! 4. sign of the partial-transpose witness vs. the Simon margin.
//!
//! Exit status 0 means every deviation stayed inside its tolerance.

use anyhow::anyhow;
use clap::Args;
use num_complex::Complex64;
use serde_json::json;
use tmsv_core::channel::{propagate_covariance, DeviceParams};
use tmsv_core::entanglement::{estimate_upper_bound, extract_pure_state, pure_entropy};
use tmsv_core::fock::output_density;
use tmsv_core::gaussian::{tmsv_covariance, tmsv_fock_amplitudes, SqueezeSpec};
use tmsv_core::oracle::{
    covariance_from_fock, dilation_output, ppt_min_eigenvalue, DilationConfig,
};
use tmsv_core::separability::simon_criterion;

use crate::emit::to_json_string;

#[derive(Args)]
pub struct VerifyArgs {
    /// Schmidt parameter q of the input.
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Amplitude transmission magnitude of the first device.
    #[arg(long, default_value_t = 0.8)]
    t1: f64,
    /// Amplitude transmission magnitude of the second device.
    #[arg(long, default_value_t = 0.7)]
    t2: f64,
    /// Photon-number truncation order of the compared box.
    #[arg(long, default_value_t = 8)]
    nmax: usize,
}

/// How far truncation at `n_max` can shift a second moment (see the
/// matching bound in the covariance reconstruction).
fn moment_tail_bound(q: f64, n_max: usize) -> f64 {
    let q2 = q * q;
    let mut sum = 0.0;
    let mut weight = (1.0 - q2) * q2.powi(n_max as i32 + 1);
    for nu in (n_max + 1)..(n_max + 400) {
        sum += weight * (2.0 * nu as f64 + 1.0);
        weight *= q2;
    }
    2.0 * sum
}

pub fn run(args: &VerifyArgs) -> anyhow::Result<()> {
    let spec = SqueezeSpec::from_q(args.q)?;
    let t1 = Complex64::new(args.t1, 0.0);
    let t2 = Complex64::new(args.t2, 0.0);
    let rho = output_density(&spec, t1, t2, args.nmax)?;

    // 1. Density matrix vs. dilation with a comfortably larger cutoff.
    let cutoff = args.nmax + 15;
    let amp = tmsv_fock_amplitudes(&spec, cutoff);
    let dilated = dilation_output(&amp.amplitudes, &DilationConfig::new(cutoff, t1, t2)?)?;
    let mut density_deviation = 0.0f64;
    for m1 in 0..=args.nmax {
        for m2 in 0..=args.nmax {
            for n1 in 0..=args.nmax {
                for n2 in 0..=args.nmax {
                    let d = (rho.element((m1, m2), (n1, n2)) - dilated.element((m1, m2), (n1, n2)))
                        .norm();
                    density_deviation = density_deviation.max(d);
                }
            }
        }
    }
    let density_tol = 1e-8;

    // 2. Covariance reconstruction vs. second-moment propagation.
    let reconstructed = covariance_from_fock(&rho)?;
    let d1 = DeviceParams::absorbing(t1, Complex64::new(0.0, 0.0), 0.0)?;
    let d2 = DeviceParams::absorbing(t2, Complex64::new(0.0, 0.0), 0.0)?;
    let propagated = propagate_covariance(&tmsv_covariance(&spec), &d1, &d2)?;
    let covariance_deviation = (reconstructed.matrix() - propagated.matrix()).abs().max();
    let covariance_tol = 1e-8f64.max(moment_tail_bound(args.q, args.nmax));

    // 3. Closed-form estimate vs. explicit decomposition.
    let closed = estimate_upper_bound(&spec, t1, t2)?.value;
    let (lambda, state) = extract_pure_state(&spec, t1, t2, 30)?;
    let estimate_deviation = (closed - (1.0 - lambda) * pure_entropy(&state)).abs();
    let estimate_tol = 1e-8;

    // 4. Witness sign vs. covariance margin (skipped on the boundary).
    let margin = simon_criterion(&propagated).margin;
    let min_eigenvalue = ppt_min_eigenvalue(&rho);
    let witness_consistent = margin.abs() < 1e-9 || (min_eigenvalue < 0.0) == (margin < 0.0);

    let ok = density_deviation <= density_tol
        && covariance_deviation <= covariance_tol
        && estimate_deviation <= estimate_tol
        && witness_consistent;

    let doc = json!({
        "inputs": { "q": args.q, "t1": args.t1, "t2": args.t2, "n_max": args.nmax },
        "density_deviation": density_deviation,
        "density_tolerance": density_tol,
        "covariance_deviation": covariance_deviation,
        "covariance_tolerance": covariance_tol,
        "estimate_deviation": estimate_deviation,
        "estimate_tolerance": estimate_tol,
        "ppt_min_eigenvalue": min_eigenvalue,
        "simon_margin": margin,
        "witness_consistent": witness_consistent,
        "ok": ok,
    });
    println!("{}", to_json_string(&doc));

    if ok {
        Ok(())
    } else {
        Err(anyhow!("oracle cross-checks exceeded tolerance"))
    }
}
