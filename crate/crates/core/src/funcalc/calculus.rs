//! Tensor and variant functional calculi of several Hermitian variables.

use num_complex::Complex;
use num_traits::Zero;

use super::spec::FunctionSpec;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{spectral_decompose_with, Hermitian, Matrix, SpectralData};
use crate::scalar::Scalar;

/// Largest tensor-space dimension the tensor calculus will build.
pub const TENSOR_DIM_CAP: usize = 4096;

fn check_arity<T: Scalar>(f: &FunctionSpec<T>, k: usize) -> Result<()> {
    if f.arity() != k {
        return Err(Error::InvalidParameter(format!(
            "function of arity {} applied to {k} matrices",
            f.arity()
        )));
    }
    Ok(())
}

fn evaluate<T: Scalar>(f: &FunctionSpec<T>, tuple: &[T]) -> Result<T> {
    if !f.in_domain(tuple) {
        return Err(Error::SpectrumDomain {
            tuple: tuple.iter().map(|x| x.to_f64_lossy()).collect(),
        });
    }
    let v = f.eval(tuple);
    if !v.is_finite() {
        return Err(Error::SpectrumDomain {
            tuple: tuple.iter().map(|x| x.to_f64_lossy()).collect(),
        });
    }
    Ok(v)
}

/// `f(X_1, …, X_k) = Σ f(λ_{i_1}, …, λ_{i_k}) P_{i_1} ⊗ ⋯ ⊗ P_{i_k}`.
pub fn func_calc_tensor<T: Scalar>(
    f: &FunctionSpec<T>,
    xs: &[Hermitian<T>],
) -> Result<Hermitian<T>> {
    func_calc_tensor_with(f, xs, &Tolerances::default())
}

pub fn func_calc_tensor_with<T: Scalar>(
    f: &FunctionSpec<T>,
    xs: &[Hermitian<T>],
    tol: &Tolerances<T>,
) -> Result<Hermitian<T>> {
    check_arity(f, xs.len())?;
    let dim: usize = xs.iter().map(|x| x.dim()).product();
    if dim > TENSOR_DIM_CAP {
        return Err(Error::CapacityExceeded {
            dim,
            cap: TENSOR_DIM_CAP,
        });
    }
    let spectra = xs
        .iter()
        .map(|x| spectral_decompose_with(x, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = Matrix::zeros(dim, dim);
    let mut tuple = Vec::with_capacity(xs.len());
    accumulate(f, &spectra, &mut tuple, None, &mut acc)?;
    Hermitian::from_matrix(acc)
}

/// Walks the factors left to right, carrying the partial Kronecker product of projections.
fn accumulate<T: Scalar>(
    f: &FunctionSpec<T>,
    spectra: &[SpectralData<T>],
    tuple: &mut Vec<T>,
    prefix: Option<&Matrix<T>>,
    acc: &mut Matrix<T>,
) -> Result<()> {
    let level = tuple.len();
    if level == spectra.len() {
        let value = evaluate(f, tuple)?;
        let term = prefix.expect("arity >= 1");
        for (a, b) in acc.as_mut_slice().iter_mut().zip(term.as_slice()) {
            *a = *a + *b * value;
        }
        return Ok(());
    }
    for (&lambda, p) in spectra[level]
        .eigenvalues
        .iter()
        .zip(&spectra[level].projections)
    {
        let next = match prefix {
            Some(m) => m.kron(p.matrix()),
            None => p.matrix().clone(),
        };
        tuple.push(lambda);
        accumulate(f, spectra, tuple, Some(&next), acc)?;
        tuple.pop();
    }
    Ok(())
}

/// `f(A, B)(K) = Σ f(λ_i, μ_j) P_i K Q_j` for `K` of shape `dim(A) x dim(B)`.
pub fn func_calc_variant<T: Scalar>(
    f: &FunctionSpec<T>,
    a: &Hermitian<T>,
    b: &Hermitian<T>,
    k: &Matrix<T>,
) -> Result<Matrix<T>> {
    func_calc_variant_with(f, a, b, k, &Tolerances::default())
}

pub fn func_calc_variant_with<T: Scalar>(
    f: &FunctionSpec<T>,
    a: &Hermitian<T>,
    b: &Hermitian<T>,
    k: &Matrix<T>,
    tol: &Tolerances<T>,
) -> Result<Matrix<T>> {
    check_arity(f, 2)?;
    if k.shape() != (a.dim(), b.dim()) {
        return Err(Error::Shape(format!(
            "K is {}x{} but A, B have dims {} and {}",
            k.rows(),
            k.cols(),
            a.dim(),
            b.dim()
        )));
    }
    let sa = spectral_decompose_with(a, tol)?;
    let sb = spectral_decompose_with(b, tol)?;
    let right: Vec<Matrix<T>> = sb.projections.iter().map(|q| k * q.matrix()).collect();
    let mut acc = Matrix::zeros(a.dim(), b.dim());
    for (&lambda, p) in sa.eigenvalues.iter().zip(&sa.projections) {
        let mut row_sum = Matrix::zeros(a.dim(), b.dim());
        for (&mu, kq) in sb.eigenvalues.iter().zip(&right) {
            let value = evaluate(f, &[lambda, mu])?;
            row_sum = &row_sum + &kq.scale(value);
        }
        acc = &acc + &(p.matrix() * &row_sum);
    }
    Ok(acc)
}

/// `tr[f(A, B)(K*) K]` for `A` of dim `n`, `B` of dim `m` and `K ∈ M_{m×n}`.
///
/// For `f(t, s) = t^p s^q` this is `tr A^p K* B^q K`.
pub fn trace_form<T: Scalar>(
    f: &FunctionSpec<T>,
    a: &Hermitian<T>,
    b: &Hermitian<T>,
    k: &Matrix<T>,
) -> Result<T> {
    if k.shape() != (b.dim(), a.dim()) {
        return Err(Error::Shape(format!(
            "K must be {}x{} (dim B x dim A), got {}x{}",
            b.dim(),
            a.dim(),
            k.rows(),
            k.cols()
        )));
    }
    let fk = func_calc_variant(f, a, b, &k.adjoint())?;
    Ok((&fk * k).trace().re)
}

/// Applies a square matrix to a coefficient vector.
pub(crate) fn mat_vec<T: Scalar>(m: &Matrix<T>, x: &[Complex<T>]) -> Vec<Complex<T>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).fold(Complex::zero(), |acc, j| acc + m[(i, j)] * x[j]))
        .collect()
}
