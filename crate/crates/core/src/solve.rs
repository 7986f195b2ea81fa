//! Scalar root bracketing and bisection.

use crate::error::{Error, Result};

/// Find a root of `f` inside `[lo, hi]` by bisection.
///
/// Requires `f(lo)` and `f(hi)` to have opposite (non-zero) signs, unless one
/// endpoint is already an exact root. Iterates until the interval width falls
/// below `tol_abs` or `max_iter` halvings have been performed, and returns
/// the interval midpoint.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol_abs: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid(
            "lo/hi",
            lo,
            "bracket must be finite with lo < hi",
        ));
    }
    if tol_abs.is_nan() || tol_abs <= 0.0 {
        return Err(Error::invalid(
            "tol_abs",
            tol_abs,
            "tolerance must be positive",
        ));
    }
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketFailure { lo, hi });
    }
    let (mut a, mut b, mut f_a) = (lo, hi, f_lo);
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        if b - a <= tol_abs || mid <= a || mid >= b {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_a.signum() {
            a = mid;
            f_a = f_mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Grow `hi` geometrically until `f(hi)` changes sign relative to `f(lo)`,
/// then bisect. Used when only a lower bracket endpoint is known a priori.
pub fn bisect_with_expansion<F>(
    mut f: F,
    lo: f64,
    initial_hi: f64,
    tol_abs: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let mut hi = initial_hi;
    for _ in 0..200 {
        let f_hi = f(hi);
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if f_hi.signum() != f_lo.signum() {
            return bisect(f, lo, hi, tol_abs, max_iter);
        }
        hi *= 2.0;
        if !hi.is_finite() {
            break;
        }
    }
    Err(Error::NoSolution(
        "sign change not found during bracket expansion",
    ))
}
