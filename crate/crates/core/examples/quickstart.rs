use num_complex::Complex64;
use tmsv_core::channel::{propagate_covariance, DeviceParams};
use tmsv_core::{
    estimate_upper_bound, output_density, simon_criterion, tmsv_covariance, SqueezeSpec,
};

fn main() {
    let spec = SqueezeSpec::from_q(0.5).unwrap();
    let t = Complex64::new(0.9, 0.0);
    let device = DeviceParams::absorbing(t, Complex64::new(0.0, 0.0), 0.0).unwrap();

    // Exact separability verdict after transmission.
    let out = propagate_covariance(&tmsv_covariance(&spec), &device, &device).unwrap();
    assert!(!simon_criterion(&out).separable_consistent);

    // Exact Fock-basis output and surviving-entanglement estimate.
    let rho = output_density(&spec, t, t, 10).unwrap();
    let report = estimate_upper_bound(&spec, t, t).unwrap();
    println!(
        "trace = {:.6}, estimate = {:.6} nats",
        rho.trace(),
        report.value
    );
}
