//! Two-mode squeezed vacuum states in the Gaussian (covariance-matrix)
//! representation.
//!
//! Quadratures are ordered (q1, p1, q2, p2) with vacuum variance 1/2, so a
//! two-mode covariance matrix is the 4x4 block matrix
//!
//! ```text
//!     V = [ X   Z  ]          X, Y, Z : 2x2 real blocks
//!         [ Z^T Y  ]
//! ```
//!
//! For a two-mode squeezed vacuum with squeeze parameter zeta the blocks are
//! X = Y = (cosh 2*zeta / 2) I and Z = diag(-sinh 2*zeta, sinh 2*zeta) / 2.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::herm;

/// Tolerance below which a covariance determinant counts as singular.
pub const SINGULARITY_TOLERANCE: f64 = 1e-12;

/// Tolerance used when checking that stored blocks have the expected
/// symmetry before they are symmetrized exactly.
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Squeezing strength of a two-mode squeezed vacuum, kept in three
/// equivalent parametrizations:
///
/// * `zeta` -- the squeeze parameter (zeta >= 0),
/// * `q = tanh(zeta)` -- the Schmidt-coefficient ratio, q in [0, 1),
/// * `mean_photons = sinh^2(zeta)` -- mean photon number per mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeSpec {
    zeta: f64,
    q: f64,
}

impl SqueezeSpec {
    /// Construct from the squeeze parameter `zeta >= 0`.
    pub fn from_zeta(zeta: f64) -> Result<Self> {
        if !zeta.is_finite() || zeta < 0.0 {
            return Err(Error::invalid("zeta", zeta, "must be finite and >= 0"));
        }
        Ok(SqueezeSpec {
            zeta,
            q: zeta.tanh(),
        })
    }

    /// Construct from the Schmidt ratio `q in [0, 1)`.
    pub fn from_q(q: f64) -> Result<Self> {
        if !q.is_finite() || !(0.0..1.0).contains(&q) {
            return Err(Error::invalid("q", q, "must lie in [0, 1)"));
        }
        Ok(SqueezeSpec { zeta: q.atanh(), q })
    }

    /// Construct from the mean photon number per mode, `n >= 0`.
    ///
    /// Uses `q^2 = n / (n + 1)`.
    pub fn from_mean_photons(n: f64) -> Result<Self> {
        if !n.is_finite() || n < 0.0 {
            return Err(Error::invalid("mean_photons", n, "must be finite and >= 0"));
        }
        Self::from_q((n / (n + 1.0)).sqrt())
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Mean photon number per mode, `q^2 / (1 - q^2)`.
    pub fn mean_photons(&self) -> f64 {
        self.q * self.q / (1.0 - self.q * self.q)
    }
}

/// A point (q1, p1, q2, p2) in two-mode phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraturePoint(pub [f64; 4]);

impl QuadraturePoint {
    pub const ORIGIN: QuadraturePoint = QuadraturePoint([0.0; 4]);

    fn vector(&self) -> Vector4<f64> {
        Vector4::from_column_slice(&self.0)
    }
}

/// Symmetric 4x4 two-mode covariance matrix.
///
/// The stored matrix is exactly symmetric; constructors symmetrize their
/// input after checking that the asymmetry is below tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    m: Matrix4<f64>,
}

impl CovarianceMatrix {
    /// Assemble from blocks X, Y (symmetric) and Z (arbitrary 2x2).
    pub fn from_blocks(x: Matrix2<f64>, y: Matrix2<f64>, z: Matrix2<f64>) -> Result<Self> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&x);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&y);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&z);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&z.transpose());
        Self::from_matrix(m)
    }

    /// Wrap a full 4x4 matrix, requiring near-exact symmetry.
    pub fn from_matrix(m: Matrix4<f64>) -> Result<Self> {
        let scale = 1.0 + m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let mut asym = 0.0f64;
        for i in 0..4 {
            for j in (i + 1)..4 {
                asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if asym > SYMMETRY_TOLERANCE * scale {
            return Err(Error::invalid(
                "covariance",
                asym,
                "matrix is not symmetric within tolerance",
            ));
        }
        let sym = (m + m.transpose()) * 0.5;
        Ok(CovarianceMatrix { m: sym })
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn x_block(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn y_block(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn z_block(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn determinant(&self) -> f64 {
        self.m.determinant()
    }

    /// Smallest eigenvalue of the Hermitian matrix V + (i/2) Omega.
    ///
    /// Non-negative (up to rounding) exactly when V describes a physical
    /// state, i.e. when the uncertainty relation holds.
    pub fn physicality_margin(&self) -> f64 {
        let omega = symplectic_form();
        let mut h = Matrix4::<Complex64>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                h[(i, j)] = Complex64::new(self.m[(i, j)], 0.5 * omega[(i, j)]);
            }
        }
        herm::eigenvalues4(&h)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether the uncertainty relation V + (i/2) Omega >= 0 holds within
    /// `tol` (a small negative eigenvalue of magnitude <= `tol` passes).
    pub fn is_physical(&self, tol: f64) -> bool {
        self.physicality_margin() >= -tol
    }
}

/// The two-mode symplectic form Omega = diag(J, J), J = [[0, 1], [-1, 0]].
pub fn symplectic_form() -> Matrix4<f64> {
    let mut omega = Matrix4::zeros();
    omega[(0, 1)] = 1.0;
    omega[(1, 0)] = -1.0;
    omega[(2, 3)] = 1.0;
    omega[(3, 2)] = -1.0;
    omega
}

/// Covariance matrix of the two-mode squeezed vacuum with the given
/// squeezing strength.
pub fn tmsv_covariance(spec: &SqueezeSpec) -> CovarianceMatrix {
    let c = (2.0 * spec.zeta()).cosh();
    let s = (2.0 * spec.zeta()).sinh();
    let x = Matrix2::from_diagonal_element(0.5 * c);
    let z = Matrix2::from_diagonal(&Vector2::new(-0.5 * s, 0.5 * s));
    CovarianceMatrix::from_blocks(x, x, z).expect("blocks are symmetric by construction")
}

/// Gaussian Wigner density at a phase-space point,
/// `W(xi) = exp(-xi^T V^{-1} xi / 2) / (4 pi^2 sqrt(det V))`.
///
/// When V has the two-mode block form X = x I, Y = y I with Z trace-free
/// symmetric, the inverse is taken in closed form; otherwise a general 4x4
/// inverse is used. A determinant below [`SINGULARITY_TOLERANCE`] is
/// reported as a degenerate state.
pub fn wigner_value(v: &CovarianceMatrix, point: &QuadraturePoint) -> Result<f64> {
    let (det, quad) = match structured_parts(v) {
        Some(s) => {
            let denom = s.x * s.y - (s.z1 * s.z1 + s.z2 * s.z2);
            let det = denom * denom;
            if det.abs() < SINGULARITY_TOLERANCE {
                return Err(Error::DegenerateCovariance { det });
            }
            let [u1, u2, w1, w2] = point.0;
            // V^{-1} = [ y I, -Z; -Z^T, x I ] / denom with Z = [[z1, z2], [z2, -z1]].
            let cross = u1 * (s.z1 * w1 + s.z2 * w2) + u2 * (s.z2 * w1 - s.z1 * w2);
            let quad =
                (s.y * (u1 * u1 + u2 * u2) + s.x * (w1 * w1 + w2 * w2) - 2.0 * cross) / denom;
            (det, quad)
        }
        None => {
            let det = v.determinant();
            if det.abs() < SINGULARITY_TOLERANCE {
                return Err(Error::DegenerateCovariance { det });
            }
            let inv = v
                .matrix()
                .try_inverse()
                .ok_or(Error::DegenerateCovariance { det })?;
            let xi = point.vector();
            (det, (inv * xi).dot(&xi))
        }
    };
    if det <= 0.0 {
        return Err(Error::DegenerateCovariance { det });
    }
    let norm = 4.0 * std::f64::consts::PI.powi(2) * det.sqrt();
    Ok((-0.5 * quad).exp() / norm)
}

struct StructuredBlocks {
    x: f64,
    y: f64,
    z1: f64,
    z2: f64,
}

/// Recognize the block structure X = x I, Y = y I, Z = [[z1, z2], [z2, -z1]].
fn structured_parts(v: &CovarianceMatrix) -> Option<StructuredBlocks> {
    let m = v.matrix();
    let scale = 1.0 + m.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    let tol = 1e-12 * scale;
    let x = m[(0, 0)];
    let y = m[(2, 2)];
    let z1 = m[(0, 2)];
    let z2 = m[(0, 3)];
    let deviations = [
        m[(1, 1)] - x,
        m[(0, 1)],
        m[(3, 3)] - y,
        m[(2, 3)],
        m[(1, 3)] + z1,
        m[(1, 2)] - z2,
    ];
    if deviations.iter().all(|d| d.abs() <= tol) {
        Some(StructuredBlocks { x, y, z1, z2 })
    } else {
        None
    }
}

/// Fock-basis Schmidt amplitudes of the two-mode squeezed vacuum truncated
/// at `n_max`: `a_n = sqrt(1 - q^2) q^n` on |n, n> for n = 0..=n_max.
#[derive(Debug, Clone, PartialEq)]
pub struct TmsvAmplitudes {
    /// Amplitudes on |0,0>, |1,1>, ..., |n_max, n_max>.
    pub amplitudes: Vec<f64>,
    /// Probability weight of the discarded levels, `q^{2 (n_max + 1)}`.
    pub tail_bound: f64,
}

/// Truncated Schmidt amplitudes of the two-mode squeezed vacuum.
pub fn tmsv_fock_amplitudes(spec: &SqueezeSpec, n_max: usize) -> TmsvAmplitudes {
    let q = spec.q();
    let head = (1.0 - q * q).sqrt();
    let mut amplitudes = Vec::with_capacity(n_max + 1);
    let mut power = 1.0;
    for _ in 0..=n_max {
        amplitudes.push(head * power);
        power *= q;
    }
    // After the loop `power` holds q^{n_max + 1}.
    TmsvAmplitudes {
        amplitudes,
        tail_bound: power * power,
    }
}
