//! Input-output relations of absorbing and amplifying four-port devices.
//!
//! Each signal mode passes one device described by complex transmission T and
//! reflection R plus a thermal occupation n_th of the internal excitations.
//! Vacuum enters every unused port. For quadrature variances the update of a
//! structured two-mode covariance matrix (X = x I, Y = y I, Z trace-free
//! symmetric) is
//!
//! ```text
//!   x' = x |T1|^2 + |R1|^2 / 2 + sigma (n_th,1 + 1/2) (1 - |T1|^2 - |R1|^2)
//!   y' = analogous with device 2
//!   w' = T1 T2 w          (w = Z11 + i Z12, the complex cross-correlation)
//! ```
//!
//! with sigma = +1 for absorbing and sigma = -1 for amplifying devices.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;

/// Energy balance tolerance for |T|^2 + |R|^2 constraints.
const ENERGY_TOLERANCE: f64 = 1e-12;

/// Tolerance for recognizing the structured covariance form.
const STRUCTURE_TOLERANCE: f64 = 1e-10;

/// Device regime: attenuating (absorbing) or amplifying.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Absorbing,
    Amplifying,
}

impl Regime {
    /// Sign sigma entering the excess-noise term: +1 absorbing, -1 amplifying.
    pub fn sigma(&self) -> f64 {
        match self {
            Regime::Absorbing => 1.0,
            Regime::Amplifying => -1.0,
        }
    }
}

/// One four-port device: transmission, reflection, regime, and the thermal
/// occupation of its internal excitations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    t: Complex64,
    r: Complex64,
    n_th: f64,
    regime: Regime,
}

impl DeviceParams {
    /// Absorbing device; requires |T|^2 + |R|^2 <= 1.
    pub fn absorbing(t: Complex64, r: Complex64, n_th: f64) -> Result<Self> {
        Self::new(t, r, n_th, Regime::Absorbing)
    }

    /// Amplifying device; requires |T|^2 + |R|^2 >= 1.
    pub fn amplifying(t: Complex64, r: Complex64, n_th: f64) -> Result<Self> {
        Self::new(t, r, n_th, Regime::Amplifying)
    }

    /// Lossless identity device (T = 1, R = 0).
    pub fn identity() -> Self {
        DeviceParams {
            t: Complex64::new(1.0, 0.0),
            r: Complex64::new(0.0, 0.0),
            n_th: 0.0,
            regime: Regime::Absorbing,
        }
    }

    fn new(t: Complex64, r: Complex64, n_th: f64, regime: Regime) -> Result<Self> {
        if !t.is_finite() || !r.is_finite() {
            return Err(Error::invalid("t/r", f64::NAN, "must be finite"));
        }
        if !n_th.is_finite() || n_th < 0.0 {
            return Err(Error::invalid("n_th", n_th, "must be finite and >= 0"));
        }
        let budget = t.norm_sqr() + r.norm_sqr();
        match regime {
            Regime::Absorbing if budget > 1.0 + ENERGY_TOLERANCE => Err(Error::invalid(
                "|T|^2 + |R|^2",
                budget,
                "absorbing device requires |T|^2 + |R|^2 <= 1",
            )),
            Regime::Amplifying if budget < 1.0 - ENERGY_TOLERANCE => Err(Error::invalid(
                "|T|^2 + |R|^2",
                budget,
                "amplifying device requires |T|^2 + |R|^2 >= 1",
            )),
            _ => Ok(DeviceParams { t, r, n_th, regime }),
        }
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn r(&self) -> Complex64 {
        self.r
    }

    pub fn n_th(&self) -> f64 {
        self.n_th
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Diagonal variance update applied by this device.
    fn propagate_diagonal(&self, x: f64) -> f64 {
        let t2 = self.t.norm_sqr();
        let r2 = self.r.norm_sqr();
        x * t2 + 0.5 * r2 + self.regime.sigma() * (self.n_th + 0.5) * (1.0 - t2 - r2)
    }
}

/// Exponential attenuation of a fiber of length `length` with absorption
/// length `l_abs`: |T| = exp(-length / l_abs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberGeometry {
    length: f64,
    l_abs: f64,
}

impl FiberGeometry {
    pub fn new(length: f64, l_abs: f64) -> Result<Self> {
        if !length.is_finite() || length < 0.0 {
            return Err(Error::invalid("length", length, "must be finite and >= 0"));
        }
        if !l_abs.is_finite() || l_abs <= 0.0 {
            return Err(Error::invalid("l_abs", l_abs, "must be finite and > 0"));
        }
        Ok(FiberGeometry { length, l_abs })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn absorption_length(&self) -> f64 {
        self.l_abs
    }
}

/// Transmission amplitude magnitude of a fiber, |T| = exp(-l / l_abs).
pub fn transmission_from_length(fiber: &FiberGeometry) -> f64 {
    (-fiber.length / fiber.l_abs).exp()
}

/// Structured representation (x, y, complex cross element) of a covariance
/// matrix with X = x I, Y = y I and Z = [[Re w, Im w], [Im w, -Re w]].
pub(crate) struct StructuredCovariance {
    pub x: f64,
    pub y: f64,
    pub w: Complex64,
}

impl StructuredCovariance {
    pub(crate) fn extract(v: &CovarianceMatrix) -> Result<Self> {
        let m = v.matrix();
        let scale = 1.0 + m.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
        let x = m[(0, 0)];
        let y = m[(2, 2)];
        let w = Complex64::new(m[(0, 2)], m[(0, 3)]);
        let deviations = [
            m[(1, 1)] - x,
            m[(0, 1)],
            m[(3, 3)] - y,
            m[(2, 3)],
            m[(1, 3)] + w.re,
            m[(1, 2)] - w.im,
        ];
        let worst = deviations.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
        if worst > STRUCTURE_TOLERANCE * scale {
            return Err(Error::UnsupportedCovariance { deviation: worst });
        }
        Ok(StructuredCovariance { x, y, w })
    }

    pub(crate) fn assemble(&self) -> CovarianceMatrix {
        let x = Matrix2::from_diagonal_element(self.x);
        let y = Matrix2::from_diagonal_element(self.y);
        let z = Matrix2::new(self.w.re, self.w.im, self.w.im, -self.w.re);
        CovarianceMatrix::from_blocks(x, y, z).expect("blocks symmetric by construction")
    }
}

/// Propagate a structured two-mode covariance matrix through a pair of
/// four-port devices (device 1 acts on mode 1, device 2 on mode 2).
///
/// Both devices must share the same regime. The output is checked against
/// the uncertainty relation; a violation indicates an internal bug and is
/// reported as such.
pub fn propagate_covariance(
    v: &CovarianceMatrix,
    device1: &DeviceParams,
    device2: &DeviceParams,
) -> Result<CovarianceMatrix> {
    if device1.regime != device2.regime {
        return Err(Error::MixedRegime);
    }
    let s = StructuredCovariance::extract(v)?;
    let out = StructuredCovariance {
        x: device1.propagate_diagonal(s.x),
        y: device2.propagate_diagonal(s.y),
        w: device1.t * device2.t * s.w,
    };
    let result = out.assemble();
    if !result.is_physical(1e-8) {
        return Err(Error::InternalInvariant(
            "propagated covariance violates the uncertainty relation",
        ));
    }
    Ok(result)
}
