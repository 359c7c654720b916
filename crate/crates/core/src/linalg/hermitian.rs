use std::ops::Deref;

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Square complex matrix equal to its conjugate transpose.
///
/// Construction symmetrizes `(M + M*)/2`, so the stored entries are exactly Hermitian.
#[derive(Clone, PartialEq, Debug)]
pub struct Hermitian<T>(Matrix<T>);

impl<T: Scalar> Hermitian<T> {
    /// Symmetrizes a square matrix.
    pub fn from_matrix(m: Matrix<T>) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::Shape(format!(
                "Hermitian matrix must be square with dim >= 1, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self::symmetrize(m))
    }

    /// Like [`Hermitian::from_matrix`], but rejects inputs whose asymmetry exceeds `tol`.
    pub fn validated(m: Matrix<T>, tol: T) -> Result<Self> {
        let asymmetry = m.asymmetry();
        if m.is_square() && asymmetry > tol {
            return Err(Error::NotHermitian {
                asymmetry: asymmetry.to_f64_lossy(),
                tolerance: tol.to_f64_lossy(),
            });
        }
        Self::from_matrix(m)
    }

    fn symmetrize(m: Matrix<T>) -> Self {
        let n = m.rows();
        let half = T::lit(0.5);
        let mut out = m.clone();
        for i in 0..n {
            out[(i, i)] = Complex::new(m[(i, i)].re, T::zero());
            for j in (i + 1)..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * half;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        Self(out)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n, n))
    }

    pub fn from_diag(diag: &[T]) -> Self {
        Self(Matrix::from_diag(diag))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_matrix(Matrix::from_real_rows(rows))
    }

    /// Scalar `1x1` matrix.
    pub fn scalar(x: T) -> Self {
        Self(Matrix::from_diag(&[x]))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(Self(self.0.try_add(&rhs.0)?))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(Self(self.0.try_sub(&rhs.0)?))
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.scale(s))
    }

    /// `(self + rhs) / 2`.
    pub fn midpoint(&self, rhs: &Self) -> Result<Self> {
        Ok(self.add(rhs)?.scale(T::lit(0.5)))
    }

    /// `self + s * I`.
    pub fn shift(&self, s: T) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.rows() {
            m[(i, i)] = m[(i, i)] + Complex::new(s, T::zero());
        }
        Self(m)
    }

    /// Entrywise conjugate, which is the transpose for a Hermitian matrix.
    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let (n, m) = (self.dim(), rhs.dim());
        let out = Matrix::from_fn(n + m, n + m, |i, j| {
            if i < n && j < n {
                self.0[(i, j)]
            } else if i >= n && j >= n {
                rhs.0[(i - n, j - n)]
            } else {
                Complex::zero()
            }
        });
        Self(out)
    }

    /// Kronecker product; the result is again Hermitian.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self(self.0.kron(&rhs.0))
    }

    /// Real quadratic form `<x, M x>` for a complex vector.
    pub fn quadratic_form(&self, x: &[Complex<T>]) -> Result<T> {
        if x.len() != self.dim() {
            return Err(Error::Shape(format!(
                "vector of length {} against a {}x{} matrix",
                x.len(),
                self.dim(),
                self.dim()
            )));
        }
        let n = self.dim();
        let mut acc = Complex::zero();
        for i in 0..n {
            let mut row = Complex::zero();
            for j in 0..n {
                row = row + self.0[(i, j)] * x[j];
            }
            acc = acc + x[i].conj() * row;
        }
        Ok(acc.re)
    }

    pub fn cast<U: Scalar>(&self) -> Hermitian<U> {
        Hermitian(self.0.cast())
    }
}

impl<T> Deref for Hermitian<T> {
    type Target = Matrix<T>;

    fn deref(&self) -> &Matrix<T> {
        &self.0
    }
}

/// Block matrix `[[a, c], [c*, b]]`.
pub fn block_2x2<T: Scalar>(a: &Matrix<T>, c: &Matrix<T>, b: &Matrix<T>) -> Result<Hermitian<T>> {
    let n = a.rows();
    let m = b.rows();
    if !a.is_square() || !b.is_square() || c.shape() != (n, m) {
        return Err(Error::Shape("inconsistent block shapes".into()));
    }
    let full = Matrix::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
        (true, true) => a[(i, j)],
        (true, false) => c[(i, j - n)],
        (false, true) => c[(j, i - n)].conj(),
        (false, false) => b[(i - n, j - n)],
    });
    Hermitian::from_matrix(full)
}
