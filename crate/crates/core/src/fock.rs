//! Exact Fock-basis representation of the transmitted state.
//!
//! For a two-mode squeezed vacuum sent through two zero-temperature
//! attenuating devices with amplitude transmissions `T1`, `T2`
//! (intensity transmissions `t_i = |T_i|^2`), every output matrix element
//! with equal photon-number offset on both modes is
//!
//! ```text
//!   <k+m, l+m| rho |k, l> = (1 - q^2) (q T1 T2)^m K_{k,l,m},    m >= 0,
//! ```
//!
//! and the conjugate expression for negative offsets; all other elements
//! vanish. The real coefficient `K_{k,l,m}` is a generalized hypergeometric
//! series (see [`k_coeff`]). Matrices are truncated at a photon-number
//! cutoff `n_max` per mode; the neglected trace weight is bounded by
//! `q^{2 (n_max + 1)}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gaussian::SqueezeSpec;
use crate::herm;

/// Hard cap on the number of series terms before giving up.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// Magnitude below which matrix elements are omitted from the JSON form.
pub const JSON_ELEMENT_THRESHOLD: f64 = 1e-14;

/// Default relative tolerance for the hypergeometric evaluations backing
/// the coefficient formulas.
pub const DEFAULT_SERIES_TOLERANCE: f64 = 1e-14;

/// Validated parameter set for a 3F2 hypergeometric series at real argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricSpec {
    upper: [f64; 3],
    lower: [f64; 2],
    z: f64,
}

impl HypergeometricSpec {
    /// Validate the parameters: the argument must lie in `[0, 1)` and no
    /// lower parameter may be a non-positive integer (a term denominator
    /// would vanish).
    pub fn new(upper: [f64; 3], lower: [f64; 2], z: f64) -> Result<Self> {
        for (i, u) in upper.iter().enumerate() {
            if !u.is_finite() {
                return Err(Error::invalid("upper", upper[i], "must be finite"));
            }
        }
        for d in lower {
            if !d.is_finite() {
                return Err(Error::invalid("lower", d, "must be finite"));
            }
            if d <= 0.0 && d.fract() == 0.0 {
                return Err(Error::invalid(
                    "lower",
                    d,
                    "non-positive integer lower parameter makes a denominator vanish",
                ));
            }
        }
        if !z.is_finite() || !(0.0..1.0).contains(&z) {
            return Err(Error::invalid("z", z, "must lie in [0, 1)"));
        }
        Ok(Self { upper, lower, z })
    }

    pub fn upper(&self) -> [f64; 3] {
        self.upper
    }

    pub fn lower(&self) -> [f64; 2] {
        self.lower
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// Evaluate the series `3F2(upper; lower; z)` by direct term recurrence
///
/// ```text
///   term_{j+1} = term_j * z * prod_i (upper_i + j) / [prod_i (lower_i + j) * (1 + j)]
/// ```
///
/// Summation stops once the current term is below `tol` relative to the
/// accumulated sum while the terms are decreasing in magnitude. If that has
/// not happened after [`MAX_SERIES_TERMS`] terms (arguments very close to
/// 1), the evaluation fails with [`Error::SeriesFailure`].
///
/// A non-positive-integer upper parameter terminates the series exactly
/// (polynomial case).
pub fn hyp_series(spec: &HypergeometricSpec, tol: f64) -> Result<f64> {
    if !tol.is_finite() || tol <= 0.0 || tol >= 1.0 {
        return Err(Error::invalid("tol", tol, "must lie in (0, 1)"));
    }
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    for j in 0..MAX_SERIES_TERMS {
        let jf = j as f64;
        let numer = (spec.upper[0] + jf) * (spec.upper[1] + jf) * (spec.upper[2] + jf);
        let denom = (spec.lower[0] + jf) * (spec.lower[1] + jf) * (1.0 + jf);
        let next = term * spec.z * numer / denom;
        if next == 0.0 {
            return Ok(sum);
        }
        let decreasing = next.abs() <= term.abs();
        sum += next;
        if decreasing && next.abs() <= tol * sum.abs() {
            return Ok(sum);
        }
        term = next;
    }
    Err(Error::SeriesFailure {
        iterations: MAX_SERIES_TERMS,
        last_term: term,
    })
}

/// Binomial coefficient as a float, built multiplicatively.
fn binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 1..=k {
        acc = acc * ((n - k + i) as f64) / (i as f64);
    }
    acc
}

/// Transmission coefficient `K_{k,l,m}` for intensity transmissions
/// `t1`, `t2` in `[0, 1]`:
///
/// ```text
///   K = q^{2a} t1^k t2^l (1-t1)^{a-k} (1-t2)^{a-l}
///       * sqrt[ C(a,k) C(a+m,k+m) C(a,l) C(a+m,l+m) ]
///       * 3F2(a+1, a+m+1, 1; a-k+1, a-l+1; q^2 (1-t1)(1-t2)),
/// ```
///
/// with `a = max(k, l)`. The series argument stays in `[0, 1)` for every
/// `q < 1`. Vanishing prefactors (full transmission or full absorption)
/// short-circuit to exact zeros before the series is evaluated.
pub fn k_coeff(spec: &SqueezeSpec, t1: f64, t2: f64, k: usize, l: usize, m: usize) -> Result<f64> {
    for (name, t) in [("t1", t1), ("t2", t2)] {
        if !t.is_finite() || !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid(
                name,
                t,
                "intensity transmission must lie in [0, 1]",
            ));
        }
    }
    let a = k.max(l);
    let u1 = 1.0 - t1;
    let u2 = 1.0 - t2;
    // Exact zeros: a transmitted photon through a fully absorbing port, or a
    // lost photon at a lossless port.
    if (t1 == 0.0 && k > 0) || (t2 == 0.0 && l > 0) {
        return Ok(0.0);
    }
    if (u1 == 0.0 && a > k) || (u2 == 0.0 && a > l) {
        return Ok(0.0);
    }
    let q2 = spec.q() * spec.q();
    let z = q2 * u1 * u2;
    let (af, mf) = (a as f64, m as f64);
    let series = hyp_series(
        &HypergeometricSpec::new(
            [af + 1.0, af + mf + 1.0, 1.0],
            [af - k as f64 + 1.0, af - l as f64 + 1.0],
            z,
        )?,
        DEFAULT_SERIES_TOLERANCE,
    )?;
    let prefactor = q2.powi(a as i32)
        * t1.powi(k as i32)
        * t2.powi(l as i32)
        * u1.powi((a - k) as i32)
        * u2.powi((a - l) as i32);
    let root =
        (binomial(a, k) * binomial(a + m, k + m) * binomial(a, l) * binomial(a + m, l + m)).sqrt();
    let value = prefactor * root * series;
    if !value.is_finite() {
        return Err(Error::InternalInvariant(
            "transmission coefficient overflowed the floating-point range",
        ));
    }
    Ok(value)
}

/// Two-mode density matrix on the truncated Fock space
/// `{0, ..., n_max} x {0, ..., n_max}`, stored row-major with composite
/// index `i = m1 * (n_max + 1) + m2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    n_max: usize,
    matrix: DMatrix<Complex64>,
    tail_bound: f64,
}

impl FockDensityMatrix {
    /// Wrap an explicit matrix. The dimension must be a perfect square
    /// `(n_max + 1)^2`.
    pub fn from_matrix(matrix: DMatrix<Complex64>, tail_bound: f64) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::invalid(
                "matrix",
                matrix.ncols() as f64,
                "density matrix must be square",
            ));
        }
        let per_mode = (dim as f64).sqrt().round() as usize;
        if per_mode == 0 || per_mode * per_mode != dim {
            return Err(Error::invalid(
                "matrix",
                dim as f64,
                "dimension must be a perfect square (n_max + 1)^2",
            ));
        }
        if !tail_bound.is_finite() || tail_bound < 0.0 {
            return Err(Error::invalid(
                "tail_bound",
                tail_bound,
                "must be finite and >= 0",
            ));
        }
        Ok(Self {
            n_max: per_mode - 1,
            matrix,
            tail_bound,
        })
    }

    /// Per-mode photon-number cutoff.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Total matrix dimension `(n_max + 1)^2`.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Upper bound on the trace weight lost to the cutoff.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    fn index(&self, pair: (usize, usize)) -> usize {
        pair.0 * (self.n_max + 1) + pair.1
    }

    /// Matrix element `<bra| rho |ket>` with per-mode photon numbers.
    pub fn element(&self, bra: (usize, usize), ket: (usize, usize)) -> Complex64 {
        self.matrix[(self.index(bra), self.index(ket))]
    }

    pub fn set_element(&mut self, bra: (usize, usize), ket: (usize, usize), value: Complex64) {
        let (i, j) = (self.index(bra), self.index(ket));
        self.matrix[(i, j)] = value;
    }

    /// Trace of the stored block (real part; the diagonal is real for any
    /// Hermitian matrix).
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        herm::min_eigenvalue_dyn(&self.matrix)
    }

    /// Mean photon number of each mode within the truncated block.
    pub fn mean_photon_numbers(&self) -> (f64, f64) {
        let mut n1 = 0.0;
        let mut n2 = 0.0;
        for m1 in 0..=self.n_max {
            for m2 in 0..=self.n_max {
                let p = self.element((m1, m2), (m1, m2)).re;
                n1 += m1 as f64 * p;
                n2 += m2 as f64 * p;
            }
        }
        (n1, n2)
    }

    /// Check the defining properties of a (truncated) density matrix:
    /// finite entries, Hermiticity, trace within `tail_bound + tol` of one,
    /// and smallest eigenvalue above `-tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let mut herm_dev = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = self.matrix[(i, j)];
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::InternalInvariant(
                        "density matrix contains non-finite entries",
                    ));
                }
                if j >= i {
                    herm_dev = herm_dev.max((v - self.matrix[(j, i)].conj()).norm());
                }
            }
        }
        if herm_dev > tol {
            return Err(Error::invalid(
                "hermiticity_deviation",
                herm_dev,
                "density matrix is not Hermitian within tolerance",
            ));
        }
        let trace = self.trace();
        if trace > 1.0 + tol || trace < 1.0 - self.tail_bound - tol {
            return Err(Error::invalid(
                "trace",
                trace,
                "trace must lie in [1 - tail_bound, 1] within tolerance",
            ));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -tol {
            return Err(Error::invalid(
                "min_eigenvalue",
                min_eig,
                "density matrix has a negative eigenvalue beyond tolerance",
            ));
        }
        Ok(())
    }

    /// Serialize as `{"n_max": ..., "elements": [[i, j, re, im], ...]}`
    /// where `i`, `j` are row-major composite indices and entries with
    /// magnitude at most [`JSON_ELEMENT_THRESHOLD`] are omitted.
    pub fn to_json_value(&self) -> Value {
        let mut elements = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = self.matrix[(i, j)];
                if v.norm() > JSON_ELEMENT_THRESHOLD {
                    elements.push(json!([i, j, v.re, v.im]));
                }
            }
        }
        json!({ "n_max": self.n_max, "elements": elements })
    }

    /// Parse the format produced by [`Self::to_json_value`]. The serialized
    /// form carries no tail information, so the reconstructed matrix
    /// reports a zero tail bound.
    pub fn from_json_value(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::MalformedDocument("expected a JSON object".into()))?;
        let n_max = obj
            .get("n_max")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::MalformedDocument("missing integer field \"n_max\"".into()))?
            as usize;
        let elements = obj
            .get("elements")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::MalformedDocument("missing array field \"elements\"".into()))?;
        let dim = (n_max + 1) * (n_max + 1);
        let mut matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for entry in elements {
            let row = entry.as_array().ok_or_else(|| {
                Error::MalformedDocument("each element must be an array [i, j, re, im]".into())
            })?;
            if row.len() != 4 {
                return Err(Error::MalformedDocument(
                    "each element must have exactly four entries [i, j, re, im]".into(),
                ));
            }
            let i = row[0].as_u64().ok_or_else(|| {
                Error::MalformedDocument("element row index must be a non-negative integer".into())
            })? as usize;
            let j = row[1].as_u64().ok_or_else(|| {
                Error::MalformedDocument(
                    "element column index must be a non-negative integer".into(),
                )
            })? as usize;
            let re = row[2].as_f64().ok_or_else(|| {
                Error::MalformedDocument("element real part must be a number".into())
            })?;
            let im = row[3].as_f64().ok_or_else(|| {
                Error::MalformedDocument("element imaginary part must be a number".into())
            })?;
            if i >= dim || j >= dim {
                return Err(Error::MalformedDocument(format!(
                    "element index ({i}, {j}) outside the {dim}x{dim} matrix"
                )));
            }
            matrix[(i, j)] = Complex64::new(re, im);
        }
        Self::from_matrix(matrix, 0.0)
    }
}

fn check_transmission(name: &'static str, t: Complex64) -> Result<f64> {
    let mag2 = t.norm_sqr();
    if !mag2.is_finite() || mag2 > 1.0 + 1e-12 {
        return Err(Error::invalid(
            name,
            mag2,
            "attenuating device requires |T|^2 <= 1",
        ));
    }
    Ok(mag2.min(1.0))
}

/// Exact output density matrix on the truncated Fock space for a two-mode
/// squeezed vacuum sent through two zero-temperature attenuating devices
/// with amplitude transmissions `t1`, `t2` (`|T_i| <= 1`).
///
/// Every element is evaluated from its closed series form, so elements
/// inside the cutoff are exact up to floating-point and series tolerance;
/// only the trace weight outside the cutoff, bounded by
/// `q^{2 (n_max + 1)}`, is missing.
pub fn output_density(
    spec: &SqueezeSpec,
    t1: Complex64,
    t2: Complex64,
    n_max: usize,
) -> Result<FockDensityMatrix> {
    let m1 = check_transmission("t1", t1)?;
    let m2 = check_transmission("t2", t2)?;
    let q = spec.q();
    let dim = (n_max + 1) * (n_max + 1);
    let mut matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let norm = 1.0 - q * q;
    let step = Complex64::new(q, 0.0) * t1 * t2;
    let idx = |a: usize, b: usize| a * (n_max + 1) + b;
    for k in 0..=n_max {
        for l in 0..=n_max {
            for m in 0..=(n_max - k.max(l)) {
                let coeff = k_coeff(spec, m1, m2, k, l, m)?;
                let value = step.powu(m as u32) * norm * coeff;
                matrix[(idx(k + m, l + m), idx(k, l))] = value;
                if m > 0 {
                    matrix[(idx(k, l), idx(k + m, l + m))] = value.conj();
                }
            }
        }
    }
    let tail_bound = (q * q).powi(n_max as i32 + 1);
    FockDensityMatrix::from_matrix(matrix, tail_bound)
}

/// Output state for the hardest two-photon truncation: the input is the
/// normalized restriction of the squeezed vacuum to at most one photon per
/// mode, `(|00> + q |11>) / sqrt(1 + q^2)`, transmitted through the same
/// zero-temperature devices. The result is exact (zero tail bound) and
/// lives on the `n_max = 1` block.
pub fn truncated_output(
    spec: &SqueezeSpec,
    t1: Complex64,
    t2: Complex64,
) -> Result<FockDensityMatrix> {
    let i1 = check_transmission("t1", t1)?;
    let i2 = check_transmission("t2", t2)?;
    let q = spec.q();
    let q2 = q * q;
    let norm = 1.0 + q2;
    let qp = Complex64::new(q, 0.0) * t1 * t2;
    let mut matrix = DMatrix::from_element(4, 4, Complex64::new(0.0, 0.0));
    let re = |x: f64| Complex64::new(x, 0.0);
    // Row-major composite index on (m1, m2): 0 = 00, 1 = 01, 2 = 10, 3 = 11.
    matrix[(0, 0)] = re((1.0 + q2 * (1.0 - i1) * (1.0 - i2)) / norm);
    matrix[(2, 2)] = re(q2 * i1 * (1.0 - i2) / norm);
    matrix[(1, 1)] = re(q2 * i2 * (1.0 - i1) / norm);
    matrix[(3, 3)] = re(qp.norm_sqr() / norm);
    matrix[(3, 0)] = qp / norm;
    matrix[(0, 3)] = qp.conj() / norm;
    FockDensityMatrix::from_matrix(matrix, 0.0)
}
