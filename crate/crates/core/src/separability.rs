//! Separability of two-mode Gaussian states.
//!
//! The positivity of the partially transposed state is equivalent, for
//! two-mode Gaussian states, to the scalar condition
//!
//! ```text
//!   det X det Y + (1/4 - |det Z|)^2 - Tr(X J Z J Y J Z^T J)
//!       >= (det X + det Y) / 4,      J = [[0, 1], [-1, 0]],
//! ```
//!
//! evaluated on the covariance blocks. The margin (lhs - rhs) is negative
//! exactly for inseparable states; the boundary margin = 0 is classified as
//! separable. Closed-form expressions for where the margin changes sign as a
//! function of thermal occupation, fiber length, and amplifier gain are
//! provided alongside.

use nalgebra::Matrix2;

use crate::channel::Regime;
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, SqueezeSpec};

/// Tolerance below which the threshold denominator 1 - R^2 - T^2 counts as
/// degenerate (lossless device).
const DENOMINATOR_TOLERANCE: f64 = 1e-12;

/// Outcome of the separability test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilityVerdict {
    /// Left-hand side of the criterion.
    pub lhs: f64,
    /// Right-hand side (det X + det Y) / 4.
    pub rhs: f64,
    /// lhs - rhs; negative exactly for inseparable Gaussian states.
    pub margin: f64,
    /// margin >= 0. For Gaussian states this is equivalent to separability;
    /// for non-Gaussian states it is merely consistent with it.
    pub separable_consistent: bool,
}

/// 2x2 matrix with compensated (double-double) entries.
type Mat2Dd = [[Dd; 2]; 2];

fn mat2_dd(m: &Matrix2<f64>) -> Mat2Dd {
    [
        [Dd::from_f64(m[(0, 0)]), Dd::from_f64(m[(0, 1)])],
        [Dd::from_f64(m[(1, 0)]), Dd::from_f64(m[(1, 1)])],
    ]
}

fn mat2_mul(a: &Mat2Dd, b: &Mat2Dd) -> Mat2Dd {
    let mut out = [[Dd::ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0].mul(b[0][j]).add(a[i][1].mul(b[1][j]));
        }
    }
    out
}

/// Right-multiplication by J = [[0, 1], [-1, 0]]; exact (only swaps/negates).
fn mat2_mul_j(a: &Mat2Dd) -> Mat2Dd {
    [[a[0][1].neg(), a[0][0]], [a[1][1].neg(), a[1][0]]]
}

fn det2_dd(m: &Matrix2<f64>) -> Dd {
    Dd::prod(m[(0, 0)], m[(1, 1)]).sub(Dd::prod(m[(0, 1)], m[(1, 0)]))
}

/// Evaluate the partial-transposition separability criterion on a two-mode
/// covariance matrix.
///
/// The combination of determinants suffers severe cancellation for strongly
/// squeezed states (individual terms grow like cosh^4 while the margin stays
/// near zero), so all products and sums are carried in double-double
/// precision and rounded once at the end.
pub fn simon_criterion(v: &CovarianceMatrix) -> SeparabilityVerdict {
    let x = v.x_block();
    let y = v.y_block();
    let z = v.z_block();

    let det_x = det2_dd(&x);
    let det_y = det2_dd(&y);
    let det_z = det2_dd(&z);

    // Tr(X J Z J Y J Z^T J): multiplications by J are exact permutations.
    let m = mat2_mul_j(&mat2_dd(&x));
    let m = mat2_mul_j(&mat2_mul(&m, &mat2_dd(&z)));
    let m = mat2_mul_j(&mat2_mul(&m, &mat2_dd(&y)));
    let m = mat2_mul_j(&mat2_mul(&m, &mat2_dd(&z.transpose())));
    let trace = m[0][0].add(m[1][1]);

    let quarter = Dd::from_f64(0.25);
    let corr = quarter.sub(det_z.abs());
    let lhs = det_x.mul(det_y).add(corr.mul(corr)).sub(trace);
    let rhs = det_x.add(det_y).mul_f64(0.25);
    let margin = lhs.sub(rhs).value();

    SeparabilityVerdict {
        lhs: lhs.value(),
        rhs: rhs.value(),
        margin,
        separable_consistent: margin >= 0.0,
    }
}

/// Thermal occupation at which the transmitted state becomes separable, for
/// equal devices of transmission magnitude `t_mag`, reflection magnitude
/// `r_mag`, and the given regime:
///
/// ```text
///   n_th* = [(1 - sigma)(1 - R^2) + T^2 (sigma - e^{-2 zeta})]
///           / [2 sigma (1 - R^2 - T^2)]
/// ```
///
/// A vanishing denominator (lossless device) has no finite threshold.
pub fn nth_threshold(spec: &SqueezeSpec, t_mag: f64, r_mag: f64, regime: Regime) -> Result<f64> {
    if !t_mag.is_finite() || t_mag < 0.0 {
        return Err(Error::invalid("t_mag", t_mag, "must be finite and >= 0"));
    }
    if !r_mag.is_finite() || r_mag < 0.0 {
        return Err(Error::invalid("r_mag", r_mag, "must be finite and >= 0"));
    }
    let t2 = t_mag * t_mag;
    let r2 = r_mag * r_mag;
    let core = 1.0 - r2 - t2;
    if core.abs() < DENOMINATOR_TOLERANCE {
        return Err(Error::NoFiniteThreshold(
            "|T|^2 + |R|^2 = 1: a lossless device exchanges no excitation with the reservoir",
        ));
    }
    let sigma = regime.sigma();
    let e2 = (-2.0 * spec.zeta()).exp();
    Ok(((1.0 - sigma) * (1.0 - r2) + t2 * (sigma - e2)) / (2.0 * sigma * core))
}

/// Fiber length at which an initially squeezed state transmitted through two
/// equal absorbing fibers (|T| = exp(-l / l_abs), R = 0) becomes separable:
///
/// ```text
///   l* = (l_abs / 2) ln[1 + (1 - e^{-2 zeta}) / (2 n_th)]
/// ```
///
/// At `n_th = 0` the state stays inseparable for every finite length.
pub fn max_length(spec: &SqueezeSpec, n_th: f64, l_abs: f64) -> Result<f64> {
    if !n_th.is_finite() || n_th < 0.0 {
        return Err(Error::invalid("n_th", n_th, "must be finite and >= 0"));
    }
    if !l_abs.is_finite() || l_abs <= 0.0 {
        return Err(Error::invalid("l_abs", l_abs, "must be finite and > 0"));
    }
    if n_th == 0.0 {
        return Err(Error::Diverging(
            "zero-temperature fibers never separate the state; the maximal length is unbounded",
        ));
    }
    // 1 - e^{-2 zeta} evaluated without cancellation for small zeta.
    let one_minus_e2 = -(-2.0 * spec.zeta()).exp_m1();
    Ok(0.5 * l_abs * (one_minus_e2 / (2.0 * n_th)).ln_1p())
}

/// Transmission budget |T|^2 at which an amplifying device pair (thermal
/// occupation zero) destroys the entanglement:
///
/// ```text
///   |T|^2 = 2 (1 - R^2) / (1 + e^{-2 zeta}).
/// ```
///
/// At R = 0 the excess gain |T|^2 - 1 equals tanh(zeta).
pub fn gain_boundary(spec: &SqueezeSpec, r_mag: f64) -> Result<f64> {
    if !r_mag.is_finite() || !(0.0..=1.0).contains(&r_mag) {
        return Err(Error::invalid("r_mag", r_mag, "must lie in [0, 1]"));
    }
    let e2 = (-2.0 * spec.zeta()).exp();
    Ok(2.0 * (1.0 - r_mag * r_mag) / (1.0 + e2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{propagate_covariance, DeviceParams};
    use crate::gaussian::tmsv_covariance;
    use crate::solve::bisect;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use nalgebra::Matrix4;
    use num_complex::Complex64;

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    /// Margin of the transmitted state for equal absorbing devices.
    fn margin_after(zeta: f64, t: f64, r: f64, n_th: f64) -> f64 {
        let v = tmsv_covariance(&SqueezeSpec::from_zeta(zeta).unwrap());
        let d = DeviceParams::absorbing(real(t), real(r), n_th).unwrap();
        let out = propagate_covariance(&v, &d, &d).unwrap();
        simon_criterion(&out).margin
    }

    #[test]
    fn vacuum_sits_exactly_on_the_boundary() {
        let v = tmsv_covariance(&SqueezeSpec::from_zeta(0.0).unwrap());
        let verdict = simon_criterion(&v);
        assert_eq!(verdict.margin, 0.0);
        assert!(verdict.separable_consistent);
        assert_abs_diff_eq!(verdict.lhs, 0.125, epsilon = 1e-16);
        assert_abs_diff_eq!(verdict.rhs, 0.125, epsilon = 1e-16);
    }

    #[test]
    fn squeezed_vacuum_is_inseparable() {
        for zeta in [0.05, 0.3, 1.0, 2.5] {
            let v = tmsv_covariance(&SqueezeSpec::from_zeta(zeta).unwrap());
            let verdict = simon_criterion(&v);
            assert!(verdict.margin < 0.0, "zeta = {zeta}");
            assert!(!verdict.separable_consistent);
        }
    }

    #[test]
    fn margin_vanishes_at_closed_form_thermal_threshold() {
        let spec = SqueezeSpec::from_zeta(0.5).unwrap();
        let n_star = nth_threshold(&spec, 0.8, 0.0, Regime::Absorbing).unwrap();
        assert!(n_star > 0.0);
        let margin = margin_after(0.5, 0.8, 0.0, n_star);
        assert_abs_diff_eq!(margin, 0.0, epsilon = 1e-11);
    }

    #[test]
    fn thermal_threshold_matches_margin_sign_change() {
        // Root of the margin located independently by bisection over n_th.
        for (zeta, t, r) in [(0.5, 0.8, 0.0), (1.0, 0.6, 0.3), (0.25, 0.9, 0.1)] {
            let spec = SqueezeSpec::from_zeta(zeta).unwrap();
            let closed = nth_threshold(&spec, t, r, Regime::Absorbing).unwrap();
            let root = bisect(|n| margin_after(zeta, t, r, n), 0.0, 20.0, 1e-12, 200).unwrap();
            assert_relative_eq!(closed, root, max_relative = 1e-9);
        }
    }

    #[test]
    fn amplifier_threshold_matches_margin_sign_change() {
        let zeta = 1.0;
        let spec = SqueezeSpec::from_zeta(zeta).unwrap();
        let t = 1.5f64.sqrt();
        let closed = nth_threshold(&spec, t, 0.0, Regime::Amplifying).unwrap();
        let margin_amp = |n: f64| {
            let v = tmsv_covariance(&spec);
            let d = DeviceParams::amplifying(real(t), real(0.0), n).unwrap();
            let out = propagate_covariance(&v, &d, &d).unwrap();
            simon_criterion(&out).margin
        };
        let root = bisect(margin_amp, 0.0, 20.0, 1e-12, 200).unwrap();
        assert_relative_eq!(closed, root, max_relative = 1e-9);
    }

    #[test]
    fn zero_squeezing_needs_no_thermal_noise() {
        let spec = SqueezeSpec::from_zeta(0.0).unwrap();
        let n_star = nth_threshold(&spec, 0.8, 0.0, Regime::Absorbing).unwrap();
        assert_abs_diff_eq!(n_star, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn lossless_device_has_no_finite_threshold() {
        let spec = SqueezeSpec::from_zeta(0.5).unwrap();
        let err = nth_threshold(&spec, 1.0, 0.0, Regime::Absorbing).unwrap_err();
        assert!(matches!(err, Error::NoFiniteThreshold(_)));
    }

    #[test]
    fn max_length_matches_margin_root_over_length() {
        let l_abs = 1.0;
        for (zeta, n_th) in [(0.5, 0.2), (1.0, 0.05), (2.0, 1.0)] {
            let spec = SqueezeSpec::from_zeta(zeta).unwrap();
            let closed = max_length(&spec, n_th, l_abs).unwrap();
            let margin_l = |l: f64| margin_after(zeta, (-l / l_abs).exp(), 0.0, n_th);
            let root = bisect(margin_l, 0.0, 2.0 * closed + 1.0, 1e-12, 200).unwrap();
            assert_relative_eq!(closed, root, max_relative = 1e-9);
        }
    }

    #[test]
    fn max_length_diverges_at_zero_temperature() {
        let spec = SqueezeSpec::from_zeta(1.0).unwrap();
        assert!(matches!(
            max_length(&spec, 0.0, 1.0).unwrap_err(),
            Error::Diverging(_)
        ));
    }

    #[test]
    fn max_length_monotonicity() {
        let l_abs = 1.0;
        // Increasing in squeezing strength at fixed temperature...
        let mut last = 0.0;
        for i in 1..=10 {
            let spec = SqueezeSpec::from_zeta(0.3 * i as f64).unwrap();
            let l = max_length(&spec, 0.2, l_abs).unwrap();
            assert!(l > last);
            last = l;
        }
        // ...and decreasing in temperature at fixed squeezing.
        let spec = SqueezeSpec::from_zeta(1.0).unwrap();
        let mut last = f64::INFINITY;
        for i in 1..=10 {
            let l = max_length(&spec, 0.1 * i as f64, l_abs).unwrap();
            assert!(l < last);
            last = l;
        }
    }

    #[test]
    fn gain_boundary_reference_points() {
        let flat = SqueezeSpec::from_zeta(0.0).unwrap();
        assert_abs_diff_eq!(gain_boundary(&flat, 0.0).unwrap(), 1.0, epsilon = 1e-15);
        for zeta in [0.1, 0.5, 1.0, 2.0] {
            let spec = SqueezeSpec::from_zeta(zeta).unwrap();
            let t2 = gain_boundary(&spec, 0.0).unwrap();
            // Excess gain |T|^2 - 1 = tanh(zeta) at R = 0.
            assert_abs_diff_eq!(t2 - 1.0, zeta.tanh(), epsilon = 1e-14);
        }
        let spec = SqueezeSpec::from_zeta(5.0).unwrap();
        assert!(gain_boundary(&spec, 0.0).unwrap() < 2.0);
    }

    #[test]
    fn margin_vanishes_on_gain_boundary() {
        let zeta = 0.5;
        let spec = SqueezeSpec::from_zeta(zeta).unwrap();
        let t2 = gain_boundary(&spec, 0.0).unwrap();
        let margin_at = |t2: f64| {
            let v = tmsv_covariance(&spec);
            let d = DeviceParams::amplifying(real(t2.sqrt()), real(0.0), 0.0).unwrap();
            let out = propagate_covariance(&v, &d, &d).unwrap();
            simon_criterion(&out).margin
        };
        assert_abs_diff_eq!(margin_at(t2), 0.0, epsilon = 1e-10);
        assert!(margin_at(t2 + 1e-4) > 0.0);
        assert!(margin_at(t2 - 1e-4) < 0.0);
    }

    #[test]
    fn margin_invariant_under_local_phase_rotations() {
        let v = tmsv_covariance(&SqueezeSpec::from_zeta(0.7).unwrap());
        let base = simon_criterion(&v).margin;
        for (phi1, phi2) in [(0.4f64, 0.0f64), (0.0, 1.1), (2.2, 0.9), (5.5, 3.3)] {
            let mut s = Matrix4::zeros();
            for (offset, phi) in [(0, phi1), (2, phi2)] {
                s[(offset, offset)] = phi.cos();
                s[(offset, offset + 1)] = phi.sin();
                s[(offset + 1, offset)] = -phi.sin();
                s[(offset + 1, offset + 1)] = phi.cos();
            }
            let rotated = CovarianceMatrix::from_matrix(s * v.matrix() * s.transpose()).unwrap();
            let margin = simon_criterion(&rotated).margin;
            assert_abs_diff_eq!(margin, base, epsilon = 1e-10);
        }
    }

    #[test]
    fn verdict_flag_tracks_margin_sign() {
        for zeta in [0.0, 0.4] {
            for n_th in [0.0, 0.5, 5.0] {
                let v = tmsv_covariance(&SqueezeSpec::from_zeta(zeta).unwrap());
                let d = DeviceParams::absorbing(real(0.7), real(0.0), n_th).unwrap();
                let out = propagate_covariance(&v, &d, &d).unwrap();
                let verdict = simon_criterion(&out);
                assert_eq!(verdict.separable_consistent, verdict.margin >= 0.0);
                assert_abs_diff_eq!(verdict.margin, verdict.lhs - verdict.rhs, epsilon = 1e-12);
            }
        }
    }
}
