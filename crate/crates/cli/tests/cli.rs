//! Black-box tests of the `tmsv` binary: exit codes, JSON/CSV shape,
//! determinism, and bit-exact agreement with the library's own numbers.

use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::Value;
use tmsv_core::fock::{output_density, FockDensityMatrix};
use tmsv_core::gaussian::SqueezeSpec;
use tmsv_core::separability::{max_length, nth_threshold};
use tmsv_core::Regime;

fn tmsv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmsv"))
        .args(args)
        .output()
        .expect("failed to launch the tmsv binary")
}

/// Run expecting success; returns stdout.
fn run_ok(args: &[&str]) -> String {
    let out = tmsv(args);
    assert!(
        out.status.success(),
        "command {args:?} failed with {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout must be UTF-8")
}

/// Run expecting failure; returns (exit code, stderr).
fn run_fail(args: &[&str]) -> (i32, String) {
    let out = tmsv(args);
    assert!(
        !out.status.success(),
        "command {args:?} unexpectedly passed"
    );
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn parse_json(text: &str) -> Value {
    serde_json::from_str(text.trim()).expect("stdout must be valid JSON")
}

/// Data rows of a CSV document (header stripped), split into fields.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    lines.next().expect("CSV must have a header row");
    lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn threshold_max_length_matches_library_bitwise() {
    let out = run_ok(&[
        "threshold",
        "--max-length",
        "--zeta",
        "1",
        "--nth",
        "0.1",
        "--la",
        "1",
    ]);
    let doc = parse_json(&out);
    assert_eq!(doc["kind"], "max_length");
    let value = doc["value"].as_f64().unwrap();
    let spec = SqueezeSpec::from_zeta(1.0).unwrap();
    let expect = max_length(&spec, 0.1, 1.0).unwrap();
    assert_eq!(value.to_bits(), expect.to_bits());
    assert_eq!(doc["inputs"]["n_th"].as_f64().unwrap(), 0.1);
}

#[test]
fn threshold_gain_at_zero_squeezing_is_unity() {
    let doc = parse_json(&run_ok(&["threshold", "--gain", "--zeta", "0"]));
    assert_eq!(doc["kind"], "gain_boundary");
    assert_eq!(doc["value"].as_f64().unwrap(), 1.0);
}

#[test]
fn threshold_zero_temperature_yields_sentinel_not_error() {
    let out = run_ok(&["threshold", "--max-length", "--zeta", "1", "--nth", "0"]);
    let doc = parse_json(&out);
    assert!(doc["value"].is_null());
    let message = doc["message"].as_str().unwrap();
    assert!(!message.is_empty());
}

#[test]
fn threshold_without_mode_is_a_usage_error() {
    let (code, stderr) = run_fail(&["threshold", "--zeta", "1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--max-length"));
}

#[test]
fn threshold_accepts_temperature_ratio() {
    let x: f64 = 1.3;
    let out = run_ok(&[
        "threshold",
        "--max-length",
        "--zeta",
        "0.8",
        "--hw-over-kt",
        "1.3",
    ]);
    let doc = parse_json(&out);
    let spec = SqueezeSpec::from_zeta(0.8).unwrap();
    let expect = max_length(&spec, 1.0 / x.exp_m1(), 1.0).unwrap();
    assert_eq!(doc["value"].as_f64().unwrap().to_bits(), expect.to_bits());
    // Giving both temperature flags is contradictory.
    let (code, _) = run_fail(&[
        "threshold",
        "--max-length",
        "--zeta",
        "0.8",
        "--nth",
        "0.1",
        "--hw-over-kt",
        "1.3",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn threshold_thermal_occupation_mode() {
    let out = run_ok(&[
        "threshold",
        "--nth-threshold",
        "--zeta",
        "1",
        "--t",
        "0.8",
        "--regime",
        "absorbing",
    ]);
    let doc = parse_json(&out);
    let spec = SqueezeSpec::from_zeta(1.0).unwrap();
    let expect = nth_threshold(&spec, 0.8, 0.0, Regime::Absorbing).unwrap();
    assert_eq!(doc["value"].as_f64().unwrap().to_bits(), expect.to_bits());
}

#[test]
fn state_vacuum_is_a_single_unit_element() {
    let doc = parse_json(&run_ok(&[
        "state", "--q", "0", "--t1", "1", "--t2", "1", "--nmax", "2",
    ]));
    let elements = doc["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 1);
    let e = elements[0].as_array().unwrap();
    assert_eq!(e[0].as_u64().unwrap(), 0);
    assert_eq!(e[1].as_u64().unwrap(), 0);
    assert_eq!(e[2].as_f64().unwrap(), 1.0);
    assert_eq!(e[3].as_f64().unwrap(), 0.0);
}

#[test]
fn state_lossless_elements_are_geometric() {
    let doc = parse_json(&run_ok(&[
        "state", "--q", "0.5", "--t1", "1", "--t2", "1", "--nmax", "4",
    ]));
    let elements = doc["elements"].as_array().unwrap();
    // Lossless: only |mm><nn| entries survive, value (1 - q^2) q^(m+n).
    assert_eq!(elements.len(), 25);
    for e in elements {
        let e = e.as_array().unwrap();
        let i = e[0].as_u64().unwrap() as usize;
        let j = e[1].as_u64().unwrap() as usize;
        assert_eq!(i % 6, 0, "row index {i} is not on the |mm> diagonal");
        assert_eq!(j % 6, 0, "column index {j} is not on the |nn> diagonal");
        let (m, n) = (i / 6, j / 6);
        let expect = 0.75 * 0.5f64.powi((m + n) as i32);
        assert!((e[2].as_f64().unwrap() - expect).abs() < 1e-15);
        assert_eq!(e[3].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn state_output_is_deterministic_with_sorted_keys() {
    let args = [
        "state",
        "--q",
        "0.5",
        "--t1",
        "0.9",
        "--t2",
        "0.7",
        "--nmax",
        "6",
        "--witness",
    ];
    let first = run_ok(&args);
    let second = run_ok(&args);
    assert_eq!(first, second, "two runs must emit identical bytes");
    let positions: Vec<usize> = [
        "\"elements\"",
        "\"n_max\"",
        "\"ppt_min_eigenvalue\"",
        "\"tail_bound\"",
        "\"trace\"",
    ]
    .iter()
    .map(|k| first.find(k).unwrap_or_else(|| panic!("missing key {k}")))
    .collect();
    assert!(
        positions.windows(2).all(|w| w[0] < w[1]),
        "keys not sorted: {positions:?}"
    );
    let doc = parse_json(&first);
    assert!(doc["ppt_min_eigenvalue"].as_f64().unwrap() < 0.0);
    assert!(doc["trace"].as_f64().unwrap() <= 1.0 + 1e-12);
    assert!(doc["tail_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn state_json_round_trips_bit_exactly() {
    let out = run_ok(&[
        "state", "--q", "0.5", "--t1", "0.9", "--t2", "0.7", "--nmax", "6",
    ]);
    let doc = parse_json(&out);
    let parsed = FockDensityMatrix::from_json_value(&doc).unwrap();
    let spec = SqueezeSpec::from_q(0.5).unwrap();
    let rho = output_density(&spec, Complex64::new(0.9, 0.0), Complex64::new(0.7, 0.0), 6).unwrap();
    let mut compared = 0usize;
    for e in doc["elements"].as_array().unwrap() {
        let e = e.as_array().unwrap();
        let i = e[0].as_u64().unwrap() as usize;
        let j = e[1].as_u64().unwrap() as usize;
        let direct = rho.matrix()[(i, j)];
        let round_tripped = parsed.matrix()[(i, j)];
        assert_eq!(round_tripped.re.to_bits(), direct.re.to_bits());
        assert_eq!(round_tripped.im.to_bits(), direct.im.to_bits());
        compared += 1;
    }
    assert!(compared > 50, "only {compared} elements compared");
}

#[test]
fn state_enforces_the_resource_cap() {
    let (code, stderr) = run_fail(&[
        "state", "--q", "0.5", "--t1", "1", "--t2", "1", "--nmax", "65",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("resource cap"), "stderr: {stderr}");
}

#[test]
fn state_cap_follows_the_environment_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_tmsv"))
        .args([
            "state", "--q", "0.3", "--t1", "1", "--t2", "1", "--nmax", "12",
        ])
        .env("TMSV_MAX_NMAX", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "cap of 10 must reject nmax 12");
    let out = Command::new(env!("CARGO_BIN_EXE_tmsv"))
        .args([
            "state", "--q", "0.3", "--t1", "1", "--t2", "1", "--nmax", "8",
        ])
        .env("TMSV_MAX_NMAX", "10")
        .output()
        .unwrap();
    assert!(out.status.success(), "cap of 10 must accept nmax 8");
}

#[test]
fn state_default_truncation_covers_the_tail() {
    // Default n_max: smallest n with q^(2(n+1)) < 1e-12. For q = 0.3 that
    // is n = 11 (0.09^12 ~ 2.8e-13).
    let doc = parse_json(&run_ok(&[
        "state", "--q", "0.3", "--t1", "0.9", "--t2", "0.9",
    ]));
    assert_eq!(doc["n_max"].as_u64().unwrap(), 11);
    assert!(doc["tail_bound"].as_f64().unwrap() < 1e-12);
}

#[test]
fn sweep_emits_exactly_steps_rows() {
    let out = run_ok(&[
        "sweep",
        "--parameter",
        "length",
        "--start",
        "0",
        "--stop",
        "2",
        "--steps",
        "2",
        "--q",
        "0.7071067811865476",
    ]);
    assert!(!out.contains('\r'), "output must use LF line endings");
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].len(), 5);
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows[1][0].parse::<f64>().unwrap(), 2.0);
}

#[test]
fn sweep_length_estimate_is_monotone_and_entangled() {
    let out = run_ok(&[
        "sweep",
        "--parameter",
        "length",
        "--start",
        "0",
        "--stop",
        "2",
        "--steps",
        "41",
        "--q",
        "0.7071067811865476",
    ]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 41);
    let mut last = f64::INFINITY;
    for row in &rows {
        let margin: f64 = row[1].parse().unwrap();
        assert!(margin < 0.0, "zero-temperature fiber keeps entanglement");
        assert_eq!(row[2], "false");
        let estimate: f64 = row[3].parse().unwrap();
        assert!(estimate <= last + 1e-14);
        last = estimate;
    }
    // Normalized column starts at 1.
    let first_ratio: f64 = rows[0][4].parse().unwrap();
    assert!((first_ratio - 1.0).abs() < 1e-12);
}

#[test]
fn sweep_runs_are_deterministic() {
    let args = [
        "sweep",
        "--parameter",
        "length",
        "--start",
        "0",
        "--stop",
        "1",
        "--steps",
        "7",
        "--zeta",
        "0.9",
    ];
    assert_eq!(run_ok(&args), run_ok(&args));
}

#[test]
fn sweep_gain_margin_changes_sign_at_the_boundary() {
    let out = run_ok(&[
        "sweep",
        "--parameter",
        "gain",
        "--start",
        "0.5",
        "--stop",
        "1.0",
        "--steps",
        "6",
        "--zeta",
        "1",
    ]);
    let rows = csv_rows(&out);
    // tanh(1) = 0.7616: entangled below, separable above.
    let verdicts: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(
        verdicts,
        ["false", "false", "false", "true", "true", "true"]
    );
    for row in &rows {
        assert_eq!(row[3], "NaN", "estimate is undefined for amplifiers");
    }
}

#[test]
fn sweep_squeezing_emits_decreasing_degradation_length() {
    let out = run_ok(&[
        "sweep",
        "--parameter",
        "squeezing",
        "--start",
        "0.1",
        "--stop",
        "10",
        "--steps",
        "12",
    ]);
    let rows = csv_rows(&out);
    assert_eq!(rows[0].len(), 6);
    let mut last = f64::INFINITY;
    for row in &rows {
        let l_e: f64 = row[5].parse().unwrap();
        assert!(l_e.is_finite() && l_e > 0.0);
        assert!(l_e < last, "degradation length must fall with brightness");
        last = l_e;
    }
}

#[test]
fn sweep_vacuum_rows_are_nan_with_warning() {
    let out = tmsv(&[
        "sweep",
        "--parameter",
        "squeezing",
        "--start",
        "0",
        "--stop",
        "1",
        "--steps",
        "3",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8_lossy(&out.stderr);
    let rows = csv_rows(&stdout);
    assert_eq!(rows[0][5], "NaN", "vacuum input has no degradation length");
    assert!(stderr.contains("warning"), "stderr: {stderr}");
    // Later rows are well defined.
    assert!(rows[2][5].parse::<f64>().unwrap().is_finite());
}

#[test]
fn sweep_rejects_bad_grids() {
    let (code, _) = run_fail(&[
        "sweep",
        "--parameter",
        "length",
        "--start",
        "0",
        "--stop",
        "1",
        "--steps",
        "1",
        "--q",
        "0.5",
    ]);
    assert_eq!(code, 2);
    let (code, _) = run_fail(&[
        "sweep",
        "--parameter",
        "length",
        "--start",
        "1",
        "--stop",
        "1",
        "--steps",
        "5",
        "--q",
        "0.5",
    ]);
    assert_eq!(code, 2);
    let (code, _) = run_fail(&[
        "sweep",
        "--parameter",
        "nth",
        "--start",
        "0",
        "--stop",
        "1",
        "--steps",
        "3",
        "--zeta",
        "1",
    ]);
    assert_eq!(code, 2, "n_th sweep without --t must be a usage error");
    let (code, _) = run_fail(&[
        "sweep",
        "--parameter",
        "squeezing",
        "--start",
        "0.1",
        "--stop",
        "1",
        "--steps",
        "3",
        "--q",
        "0.5",
    ]);
    assert_eq!(code, 2, "squeezing sweep must reject a fixed --q");
}

#[test]
fn verify_passes_and_stays_hidden() {
    let out = run_ok(&["verify"]);
    let doc = parse_json(&out);
    assert_eq!(doc["ok"], Value::Bool(true));
    assert!(doc["density_deviation"].as_f64().unwrap() < 1e-8);
    let help = run_ok(&["--help"]);
    assert!(!help.contains("verify"), "verify must not be advertised");
}
