//! Dense complex Hermitian linear algebra.

mod eigen;
mod hermitian;
mod matrix;
pub mod random;

pub use eigen::{
    apply_scalar_function, eigenvalues, eigh, inverse, is_psd, max_eigenvalue, min_eigenvalue,
    spectral_decompose, spectral_decompose_with, sqrt_psd, Eigen, ProjectionResiduals,
    SpectralData,
};
pub use hermitian::{block_2x2, Hermitian};
pub use matrix::Matrix;

use crate::error::Result;
use crate::scalar::Scalar;
use num_complex::Complex;

pub fn kronecker_product<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>) -> Matrix<T> {
    x.kron(y)
}

pub fn hadamard_product<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>) -> Result<Matrix<T>> {
    x.hadamard(y)
}

/// `tr(X Y*)`.
pub fn hs_inner<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>) -> Result<Complex<T>> {
    x.hs_inner(y)
}
