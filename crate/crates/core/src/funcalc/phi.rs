//! The unitary identification of `H_1 ⊗ conj(H_2)` with `n_1 x n_2` matrices.
//!
//! Coefficients are stored row-major with the last factor fastest, matching the
//! index order of the Kronecker product. The factor for `B` lives on the conjugate
//! space, so on tensors `B` acts through its entrywise conjugate.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::calculus::{func_calc_tensor, func_calc_variant, mat_vec};
use super::spec::FunctionSpec;
use crate::error::{Error, Result};
use crate::linalg::{Hermitian, Matrix};
use crate::scalar::Scalar;

/// Coefficients `φ(m_1, …, m_k)` of a tensor in a fixed product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorVector<T> {
    dims: Vec<usize>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> TensorVector<T> {
    pub fn new(dims: Vec<usize>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if dims.is_empty() || n != coeffs.len() {
            return Err(Error::Shape(format!(
                "{} coefficients for dims {dims:?}",
                coeffs.len()
            )));
        }
        Ok(Self { dims, coeffs })
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let n = dims.iter().product();
        Self {
            dims,
            coeffs: vec![Complex::zero(); n],
        }
    }

    /// Product basis tensor `e_{m_1} ⊗ ⋯ ⊗ e_{m_k}` (zero-based indices).
    pub fn basis(dims: Vec<usize>, index: &[usize]) -> Result<Self> {
        if index.len() != dims.len() || index.iter().zip(&dims).any(|(&i, &d)| i >= d) {
            return Err(Error::IndexOutOfRange(format!(
                "{index:?} for dims {dims:?}"
            )));
        }
        let flat = index.iter().zip(&dims).fold(0, |acc, (&i, &d)| acc * d + i);
        let mut t = Self::zeros(dims);
        t.coeffs[flat] = Complex::one();
        Ok(t)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn norm(&self) -> T {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `(M φ | φ)` for a Hermitian operator on the tensor space.
    pub fn expectation(&self, m: &Hermitian<T>) -> Result<T> {
        m.quadratic_form(&self.coeffs)
    }

    fn apply(&self, m: &Matrix<T>) -> Self {
        Self {
            dims: self.dims.clone(),
            coeffs: mat_vec(m, &self.coeffs),
        }
    }
}

/// `Φ`: sends `e_i ⊗ e_j` to the matrix unit `e_{ij}`.
pub fn phi_map<T: Scalar>(phi: &TensorVector<T>) -> Result<Matrix<T>> {
    match phi.dims() {
        &[n1, n2] => Matrix::from_vec(n1, n2, phi.coeffs.clone()),
        dims => Err(Error::InvalidParameter(format!(
            "phi_map needs a two-factor tensor, got dims {dims:?}"
        ))),
    }
}

pub fn phi_inverse<T: Scalar>(k: &Matrix<T>) -> TensorVector<T> {
    TensorVector {
        dims: vec![k.rows(), k.cols()],
        coeffs: k.as_slice().to_vec(),
    }
}

/// `f(A, B)` acting on `H_1 ⊗ conj(H_2)`.
pub fn conjugate_space_calculus<T: Scalar>(
    f: &FunctionSpec<T>,
    a: &Hermitian<T>,
    b: &Hermitian<T>,
) -> Result<Hermitian<T>> {
    func_calc_tensor(f, &[a.clone(), b.conj()])
}

/// `‖Φ(f(A,B)φ) − f(A,B)(Φφ)‖_HS`; zero up to rounding for every valid input.
pub fn intertwine_check<T: Scalar>(
    f: &FunctionSpec<T>,
    a: &Hermitian<T>,
    b: &Hermitian<T>,
    phi: &TensorVector<T>,
) -> Result<T> {
    if phi.dims() != [a.dim(), b.dim()] {
        return Err(Error::Shape(format!(
            "tensor dims {:?} vs ({}, {})",
            phi.dims(),
            a.dim(),
            b.dim()
        )));
    }
    let tensor_side = phi.apply(conjugate_space_calculus(f, a, b)?.matrix());
    let lhs = phi_map(&tensor_side)?;
    let rhs = func_calc_variant(f, a, b, &phi_map(phi)?)?;
    Ok(lhs.distance(&rhs))
}

/// `(f(A,B)φ | φ)` on `H_1 ⊗ conj(H_2)`.
pub fn tensor_expectation<T: Scalar>(
    f: &FunctionSpec<T>,
    a: &Hermitian<T>,
    b: &Hermitian<T>,
    phi: &TensorVector<T>,
) -> Result<T> {
    phi.expectation(&conjugate_space_calculus(f, a, b)?)
}
