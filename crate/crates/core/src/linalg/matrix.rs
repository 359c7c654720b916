//! Dense complex matrices stored row-major as real/imaginary pairs.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// General dense `rows x cols` complex matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row-major complex entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries given for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds from nested real rows, converting from `f64`.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| Complex::new(T::lit(rows[i][j]), T::zero()))
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(diag[i], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    /// Matrix unit with a one at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(i, j)] = Complex::one();
        m
    }

    /// Column vector from complex entries.
    pub fn column(entries: Vec<Complex<T>>) -> Self {
        let n = entries.len();
        Self {
            rows: n,
            cols: 1,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn col(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .fold(Complex::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o = *o + a * *b;
                }
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, rhs: &Self, what: &str) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::Shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs, "addition")?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs, "subtraction")?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Standard Kronecker product; the row index of `self ⊗ rhs` is `i * rhs.rows + k`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (r1, c1) = self.shape();
        let (r2, c2) = rhs.shape();
        let mut out = Self::zeros(r1 * r2, c1 * c2);
        let oc = c1 * c2;
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        out.data[(i * r2 + k) * oc + j * c2 + l] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Entrywise (Schur) product.
    pub fn hadamard(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs, "Hadamard product")?;
        Ok(self.zip_with(rhs, |a, b| a * b))
    }

    /// Hilbert-Schmidt pairing `tr(X Y*)`.
    pub fn hs_inner(&self, rhs: &Self) -> Result<Complex<T>> {
        self.check_same_shape(rhs, "Hilbert-Schmidt pairing")?;
        Ok(self
            .data
            .iter()
            .zip(&rhs.data)
            .fold(Complex::zero(), |acc, (a, b)| acc + *a * b.conj()))
    }

    /// Frobenius distance to `rhs` (same shape required).
    pub fn distance(&self, rhs: &Self) -> T {
        assert_eq!(
            self.shape(),
            rhs.shape(),
            "distance between differently shaped matrices"
        );
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// Largest entrywise modulus of `self - rhs` (same shape required).
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!(
            self.shape(),
            rhs.shape(),
            "difference of differently shaped matrices"
        );
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn asymmetry(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Converts the scalar width, e.g. `f64` to `f32`.
    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|z| -z)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = &self[(i, j)];
                write!(f, "({:?}, {:?}) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_real_rows(rows)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = Matrix::<f64>::identity(2).kron(&Matrix::identity(3));
        assert_eq!(k, Matrix::identity(6));
    }

    #[test]
    fn kron_of_diagonals() {
        let k = Matrix::from_diag(&[1.0, 2.0]).kron(&Matrix::from_diag(&[3.0, 4.0]));
        assert_eq!(k, Matrix::from_diag(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn hadamard_entrywise() {
        let x = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let y = m(&[&[5.0, 6.0], &[7.0, 8.0]]);
        assert_eq!(x.hadamard(&y).unwrap(), m(&[&[5.0, 12.0], &[21.0, 32.0]]));
        let ones = m(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(x.hadamard(&ones).unwrap(), x);
    }

    #[test]
    fn hadamard_shape_error() {
        let x = Matrix::<f64>::identity(2);
        let y = Matrix::<f64>::identity(3);
        assert!(matches!(x.hadamard(&y), Err(Error::Shape(_))));
    }

    #[test]
    fn hs_inner_basics() {
        let i2 = Matrix::<f64>::identity(2);
        assert_eq!(i2.hs_inner(&i2).unwrap(), Complex::new(2.0, 0.0));
        let e12 = Matrix::<f64>::unit(2, 2, 0, 1);
        assert_eq!(e12.hs_inner(&e12).unwrap(), Complex::new(1.0, 0.0));
        assert!(i2.hs_inner(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn hs_inner_is_conjugate_symmetric() {
        let x = Matrix::from_fn(2, 3, |i, j| Complex::new(i as f64 + 0.5, j as f64 - 1.0));
        let y = Matrix::from_fn(2, 3, |i, j| Complex::new((i * j) as f64, 1.0 + i as f64));
        let a = x.hs_inner(&y).unwrap();
        let b = y.hs_inner(&x).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn matmul_shape_error() {
        let a = Matrix::<f64>::zeros(2, 3);
        assert!(a.try_matmul(&a).is_err());
        assert_eq!((&a * &Matrix::zeros(3, 4)).shape(), (2, 4));
    }
}
