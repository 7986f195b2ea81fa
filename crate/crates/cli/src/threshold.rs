//! `tmsv threshold` — closed-form separability boundaries as JSON.

use clap::{Args, ValueEnum};
use serde_json::{json, Map, Value};
use tmsv_core::channel::Regime;
use tmsv_core::error::Error;
use tmsv_core::separability::{gain_boundary, max_length, nth_threshold};

use crate::emit::to_json_string;
use crate::{usage_error, SqueezeArgs};

#[derive(Clone, Copy, ValueEnum)]
pub enum RegimeArg {
    Absorbing,
    Amplifying,
}

impl RegimeArg {
    fn to_regime(self) -> Regime {
        match self {
            RegimeArg::Absorbing => Regime::Absorbing,
            RegimeArg::Amplifying => Regime::Amplifying,
        }
    }

    fn label(self) -> &'static str {
        match self {
            RegimeArg::Absorbing => "absorbing",
            RegimeArg::Amplifying => "amplifying",
        }
    }
}

#[derive(Args)]
pub struct ThresholdArgs {
    /// Fiber length at which thermal noise separates the output.
    #[arg(long, group = "mode")]
    max_length: bool,
    /// Amplifier transmission budget |T|^2 beyond which the output is
    /// separable (zero reservoir temperature).
    #[arg(long, group = "mode")]
    gain: bool,
    /// Reservoir occupation n_th above which the output is separable.
    #[arg(long, group = "mode")]
    nth_threshold: bool,

    #[command(flatten)]
    squeeze: SqueezeArgs,

    /// Thermal reservoir occupation n_th (>= 0).
    #[arg(long)]
    nth: Option<f64>,
    /// Reservoir temperature as the ratio hbar*omega / (k_B T); converted
    /// to n_th through the Bose factor 1 / (e^x - 1).
    #[arg(long = "hw-over-kt")]
    hw_over_kt: Option<f64>,
    /// Absorption length l_A of the fibers.
    #[arg(long, default_value_t = 1.0)]
    la: f64,
    /// Amplitude transmission magnitude |T| (for --nth-threshold).
    #[arg(long)]
    t: Option<f64>,
    /// Amplitude reflection magnitude |R|.
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    /// Device regime (for --nth-threshold).
    #[arg(long, value_enum, default_value_t = RegimeArg::Absorbing)]
    regime: RegimeArg,
}

impl ThresholdArgs {
    /// Thermal occupation from either `--nth` or `--hw-over-kt`.
    fn resolve_nth(&self) -> Option<f64> {
        match (self.nth, self.hw_over_kt) {
            (Some(_), Some(_)) => usage_error("--nth and --hw-over-kt are mutually exclusive"),
            (Some(n), None) => Some(n),
            (None, Some(x)) => {
                if x <= 0.0 {
                    usage_error("--hw-over-kt must be positive");
                }
                Some(1.0 / x.exp_m1())
            }
            (None, None) => None,
        }
    }
}

fn record(kind: &str, value: Value, inputs: Map<String, Value>) -> Value {
    json!({ "kind": kind, "value": value, "inputs": Value::Object(inputs) })
}

pub fn run(args: &ThresholdArgs) -> anyhow::Result<()> {
    let spec = args.squeeze.resolve()?;
    let mut inputs = Map::new();
    inputs.insert("zeta".into(), json!(spec.zeta()));
    inputs.insert("q".into(), json!(spec.q()));

    let doc = if args.max_length {
        let n_th = args
            .resolve_nth()
            .unwrap_or_else(|| usage_error("--max-length requires --nth or --hw-over-kt"));
        inputs.insert("n_th".into(), json!(n_th));
        inputs.insert("l_abs".into(), json!(args.la));
        match max_length(&spec, n_th, args.la) {
            Ok(value) => record("max_length", json!(value), inputs),
            Err(Error::Diverging(reason)) => {
                let mut doc = record("max_length", Value::Null, inputs);
                doc.as_object_mut()
                    .expect("record is an object")
                    .insert("message".into(), json!(reason));
                doc
            }
            Err(e) => return Err(e.into()),
        }
    } else if args.gain {
        inputs.insert("r".into(), json!(args.r));
        record(
            "gain_boundary",
            json!(gain_boundary(&spec, args.r)?),
            inputs,
        )
    } else if args.nth_threshold {
        let t = args
            .t
            .unwrap_or_else(|| usage_error("--nth-threshold requires --t"));
        inputs.insert("t".into(), json!(t));
        inputs.insert("r".into(), json!(args.r));
        inputs.insert("regime".into(), json!(args.regime.label()));
        record(
            "nth_threshold",
            json!(nth_threshold(&spec, t, args.r, args.regime.to_regime())?),
            inputs,
        )
    } else {
        usage_error("one of --max-length, --gain, --nth-threshold is required");
    };

    println!("{}", to_json_string(&doc));
    Ok(())
}
