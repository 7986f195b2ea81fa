//! Hermitian eigenvalue helpers shared across modules.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

/// Real eigenvalues of a Hermitian 4x4 complex matrix.
pub(crate) fn eigenvalues4(m: &Matrix4<Complex64>) -> [f64; 4] {
    let eig = nalgebra::linalg::SymmetricEigen::new(*m);
    let mut vals = [0.0; 4];
    for (dst, src) in vals.iter_mut().zip(eig.eigenvalues.iter()) {
        *dst = *src;
    }
    vals
}

/// Real eigenvalues of a Hermitian complex matrix of arbitrary size.
pub(crate) fn eigenvalues_dyn(m: &DMatrix<Complex64>) -> Vec<f64> {
    let eig = nalgebra::linalg::SymmetricEigen::new(m.clone());
    eig.eigenvalues.iter().copied().collect()
}

/// Smallest eigenvalue of a Hermitian complex matrix.
pub(crate) fn min_eigenvalue_dyn(m: &DMatrix<Complex64>) -> f64 {
    eigenvalues_dyn(m).into_iter().fold(f64::INFINITY, f64::min)
}
