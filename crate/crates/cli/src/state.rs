//! `tmsv state` — exact Fock-basis output density matrix as JSON.
//!
//! The document contains the sparse element list (`[i, j, re, im]` with
//! row-major composite indices), the truncation order, and metadata:
//! trace, tail bound, and (with `--witness`) the minimum eigenvalue of the
//! partial transpose.

use anyhow::{anyhow, Context};
use clap::Args;
use num_complex::Complex64;
use serde_json::json;
use tmsv_core::fock::output_density;
use tmsv_core::oracle::ppt_min_eigenvalue;

use crate::emit::to_json_string;
use crate::SqueezeArgs;

/// Default ceiling on the truncation order; computing and serializing a
/// density matrix of dimension (n_max + 1)^2 grows quartically, so large
/// requests must be deliberate.
const DEFAULT_MAX_NMAX: usize = 64;

/// Tail mass below which the default truncation order stops growing.
const DEFAULT_TAIL_TARGET: f64 = 1e-12;

#[derive(Args)]
pub struct StateArgs {
    #[command(flatten)]
    squeeze: SqueezeArgs,
    /// Amplitude transmission magnitude of the first device, in [0, 1].
    #[arg(long)]
    t1: f64,
    /// Amplitude transmission magnitude of the second device, in [0, 1].
    #[arg(long)]
    t2: f64,
    /// Photon-number truncation order (defaults to the smallest order whose
    /// input tail mass falls below 1e-12, capped by the resource limit).
    #[arg(long)]
    nmax: Option<usize>,
    /// Also report the minimum eigenvalue of the partial transpose.
    #[arg(long)]
    witness: bool,
}

/// Resource cap on n_max; `TMSV_MAX_NMAX` overrides the built-in default.
fn nmax_cap() -> anyhow::Result<usize> {
    match std::env::var("TMSV_MAX_NMAX") {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .with_context(|| format!("TMSV_MAX_NMAX must be a non-negative integer, got {text:?}")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_NMAX),
        Err(e) => Err(anyhow!("TMSV_MAX_NMAX is not valid Unicode: {e}")),
    }
}

/// Smallest truncation order whose neglected input weight q^(2(n+1)) is
/// below the tail target, clamped to the cap.
fn default_nmax(q: f64, cap: usize) -> usize {
    let q2 = q * q;
    let mut n = 0usize;
    let mut tail = q2;
    while tail >= DEFAULT_TAIL_TARGET && n < cap {
        n += 1;
        tail *= q2;
    }
    n
}

pub fn run(args: &StateArgs) -> anyhow::Result<()> {
    let spec = args.squeeze.resolve()?;
    let cap = nmax_cap()?;
    let n_max = match args.nmax {
        Some(n) => {
            if n > cap {
                return Err(anyhow!(
                    "n_max = {n} exceeds the resource cap of {cap}; \
                     set TMSV_MAX_NMAX to raise the cap deliberately"
                ));
            }
            n
        }
        None => default_nmax(spec.q(), cap),
    };

    let t1 = Complex64::new(args.t1, 0.0);
    let t2 = Complex64::new(args.t2, 0.0);
    let rho = output_density(&spec, t1, t2, n_max)?;

    let mut doc = rho.to_json_value();
    let obj = doc.as_object_mut().expect("state document is an object");
    obj.insert("trace".into(), json!(rho.trace()));
    obj.insert("tail_bound".into(), json!(rho.tail_bound()));
    if args.witness {
        obj.insert("ppt_min_eigenvalue".into(), json!(ppt_min_eigenvalue(&rho)));
    }

    println!("{}", to_json_string(&doc));
    Ok(())
}
