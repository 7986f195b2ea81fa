//! Independent cross-check routes for the transmitted state.
//!
//! Everything here deliberately avoids the closed series forms of the
//! [`crate::fock`] module: the channel is realized as an explicit
//! beam-splitter dilation with vacuum ancillas that are traced out
//! combinatorially. The same states can therefore be produced along two
//! unrelated computational routes and compared, and covariance matrices can
//! be reconstructed from Fock data instead of propagated.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockDensityMatrix;
use crate::gaussian::CovarianceMatrix;
use crate::herm;

/// Largest truncation tail for which a covariance reconstruction is
/// accepted.
pub const COVARIANCE_TAIL_LIMIT: f64 = 1e-3;

/// Cutoff and transmissions of a beam-splitter dilation of two
/// zero-temperature loss channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationConfig {
    n_max: usize,
    t1: Complex64,
    t2: Complex64,
}

impl DilationConfig {
    /// The dilation models pure loss, so both transmissions must satisfy
    /// `|T| <= 1`; a cutoff of at least one level above vacuum is required.
    pub fn new(n_max: usize, t1: Complex64, t2: Complex64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::invalid("n_max", n_max as f64, "must be >= 1"));
        }
        for (name, t) in [("t1", t1), ("t2", t2)] {
            let mag2 = t.norm_sqr();
            if !mag2.is_finite() || mag2 > 1.0 + 1e-12 {
                return Err(Error::invalid(name, mag2, "dilation requires |T|^2 <= 1"));
            }
        }
        Ok(Self { n_max, t1, t2 })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn t1(&self) -> Complex64 {
        self.t1
    }

    pub fn t2(&self) -> Complex64 {
        self.t2
    }
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 1..=k {
        acc = acc * ((n - k + i) as f64) / (i as f64);
    }
    acc
}

/// Beam-splitter amplitudes `B[nu][k] = sqrt(C(nu, k)) T^k R'^{nu - k}`
/// with a real ancilla coupling `R' = sqrt(1 - |T|^2)`.
fn splitter_table(len: usize, t: Complex64) -> Vec<Vec<Complex64>> {
    let r = (1.0 - t.norm_sqr()).max(0.0).sqrt();
    (0..len)
        .map(|nu| {
            (0..=nu)
                .map(|k| t.powu(k as u32) * binomial_f64(nu, k).sqrt() * r.powi((nu - k) as i32))
                .collect()
        })
        .collect()
}

/// Transmit a state with Schmidt amplitudes `amplitudes[nu]` on |nu, nu>
/// through the dilated loss channels and trace out both ancillas.
///
/// Every input level must fit inside the cutoff (`amplitudes.len() <=
/// n_max + 1`); the reported tail bound is the missing input norm.
pub fn dilation_output(amplitudes: &[f64], config: &DilationConfig) -> Result<FockDensityMatrix> {
    let levels = config.n_max + 1;
    if amplitudes.len() > levels {
        return Err(Error::TruncationOverflow {
            required: amplitudes.len(),
            available: levels,
        });
    }
    let mut norm2 = 0.0f64;
    for &c in amplitudes {
        if !c.is_finite() {
            return Err(Error::invalid("amplitudes", c, "must be finite"));
        }
        norm2 += c * c;
    }
    if norm2 > 1.0 + 1e-9 {
        return Err(Error::invalid(
            "amplitudes",
            norm2,
            "squared norm exceeds one",
        ));
    }

    let b1 = splitter_table(amplitudes.len(), config.t1);
    let b2 = splitter_table(amplitudes.len(), config.t2);
    let dim = levels * levels;
    let idx = |a: usize, b: usize| a * levels + b;
    let mut matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));

    // Tracing each ancilla forces equal photon loss on bra and ket branches:
    // j1 = nu - m1 = nu' - n1 and j2 = nu - m2 = nu' - n2.
    for (nu, &c) in amplitudes.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        for (nup, &cp) in amplitudes.iter().enumerate() {
            if cp == 0.0 {
                continue;
            }
            let max_loss = nu.min(nup);
            for j1 in 0..=max_loss {
                let f1 = b1[nu][nu - j1] * b1[nup][nup - j1].conj();
                for j2 in 0..=max_loss {
                    let f2 = b2[nu][nu - j2] * b2[nup][nup - j2].conj();
                    matrix[(idx(nu - j1, nu - j2), idx(nup - j1, nup - j2))] += c * cp * f1 * f2;
                }
            }
        }
    }
    FockDensityMatrix::from_matrix(matrix, (1.0 - norm2).max(0.0))
}

/// Reconstruct the quadrature covariance matrix of a truncated two-mode
/// Fock-basis density matrix from its ladder-operator moments.
///
/// The quadrature frame of mode 2 is rotated by pi relative to the raw
/// ladder operators; this matches the sign convention of
/// [`crate::gaussian::tmsv_covariance`], where the squeezed vacuum carries
/// a negative q1-q2 correlation while its Fock amplitudes are positive.
/// States whose truncation tail exceeds [`COVARIANCE_TAIL_LIMIT`] are
/// rejected, because the moments would not be trustworthy.
pub fn covariance_from_fock(rho: &FockDensityMatrix) -> Result<CovarianceMatrix> {
    if rho.tail_bound() > COVARIANCE_TAIL_LIMIT {
        return Err(Error::TailTooLarge {
            tail_bound: rho.tail_bound(),
            limit: COVARIANCE_TAIL_LIMIT,
        });
    }
    let n_max = rho.n_max();
    let zero = Complex64::new(0.0, 0.0);
    let (mut a1, mut a2) = (zero, zero);
    let (mut a1_sq, mut a2_sq) = (zero, zero);
    let (mut n1, mut n2) = (0.0f64, 0.0f64);
    let (mut a1a2, mut a1d_a2) = (zero, zero);
    for m1 in 0..=n_max {
        for m2 in 0..=n_max {
            let p = rho.element((m1, m2), (m1, m2)).re;
            n1 += m1 as f64 * p;
            n2 += m2 as f64 * p;
            if m1 >= 1 {
                a1 += (m1 as f64).sqrt() * rho.element((m1, m2), (m1 - 1, m2));
            }
            if m2 >= 1 {
                a2 += (m2 as f64).sqrt() * rho.element((m1, m2), (m1, m2 - 1));
            }
            if m1 >= 2 {
                a1_sq += ((m1 * (m1 - 1)) as f64).sqrt() * rho.element((m1, m2), (m1 - 2, m2));
            }
            if m2 >= 2 {
                a2_sq += ((m2 * (m2 - 1)) as f64).sqrt() * rho.element((m1, m2), (m1, m2 - 2));
            }
            if m1 >= 1 && m2 >= 1 {
                a1a2 += ((m1 * m2) as f64).sqrt() * rho.element((m1, m2), (m1 - 1, m2 - 1));
            }
            if m2 >= 1 && m1 < n_max {
                a1d_a2 += (((m1 + 1) * m2) as f64).sqrt() * rho.element((m1, m2), (m1 + 1, m2 - 1));
            }
        }
    }

    // Rotate mode 2 by pi: b -> -b. Quadratic single-mode moments are even
    // in b and unchanged.
    a2 = -a2;
    a1a2 = -a1a2;
    a1d_a2 = -a1d_a2;

    let sqrt2 = std::f64::consts::SQRT_2;
    let first = [sqrt2 * a1.re, sqrt2 * a1.im, sqrt2 * a2.re, sqrt2 * a2.im];

    let mut m = nalgebra::Matrix4::<f64>::zeros();
    m[(0, 0)] = n1 + 0.5 + a1_sq.re - first[0] * first[0];
    m[(1, 1)] = n1 + 0.5 - a1_sq.re - first[1] * first[1];
    m[(0, 1)] = a1_sq.im - first[0] * first[1];
    m[(2, 2)] = n2 + 0.5 + a2_sq.re - first[2] * first[2];
    m[(3, 3)] = n2 + 0.5 - a2_sq.re - first[3] * first[3];
    m[(2, 3)] = a2_sq.im - first[2] * first[3];
    m[(0, 2)] = a1a2.re + a1d_a2.re - first[0] * first[2];
    m[(0, 3)] = a1a2.im + a1d_a2.im - first[0] * first[3];
    m[(1, 2)] = a1a2.im - a1d_a2.im - first[1] * first[2];
    m[(1, 3)] = -a1a2.re + a1d_a2.re - first[1] * first[3];
    for i in 0..4 {
        for j in (i + 1)..4 {
            m[(j, i)] = m[(i, j)];
        }
    }
    CovarianceMatrix::from_matrix(m)
}

/// Partial transposition on the second mode:
/// `<m1, m2| rho^PT |n1, n2> = <m1, n2| rho |n1, m2>`.
pub fn partial_transpose(rho: &FockDensityMatrix) -> FockDensityMatrix {
    let n_max = rho.n_max();
    let dim = rho.dim();
    let mut matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let idx = |a: usize, b: usize| a * (n_max + 1) + b;
    for m1 in 0..=n_max {
        for m2 in 0..=n_max {
            for n1 in 0..=n_max {
                for n2 in 0..=n_max {
                    matrix[(idx(m1, m2), idx(n1, n2))] = rho.element((m1, n2), (n1, m2));
                }
            }
        }
    }
    FockDensityMatrix::from_matrix(matrix, rho.tail_bound())
        .expect("partial transposition preserves the matrix shape")
}

/// Smallest eigenvalue of the partially transposed matrix. Strictly
/// negative values witness entanglement.
pub fn ppt_min_eigenvalue(rho: &FockDensityMatrix) -> f64 {
    herm::min_eigenvalue_dyn(partial_transpose(rho).matrix())
}

/// Logarithmic negativity `ln ||rho^PT||_1` computed from the eigenvalues
/// of the partial transpose. Zero (up to the truncation deficit) for states
/// with positive partial transpose.
pub fn ppt_log_negativity(rho: &FockDensityMatrix) -> f64 {
    let eigen = herm::eigenvalues_dyn(partial_transpose(rho).matrix());
    eigen.iter().map(|l| l.abs()).sum::<f64>().ln()
}
