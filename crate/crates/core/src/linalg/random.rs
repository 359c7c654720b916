//! Seeded random matrix ensembles.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::hermitian::Hermitian;
use super::matrix::Matrix;
use crate::scalar::Scalar;

/// Deterministic per-trial stream derived from `(seed, stream)`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn complex_gaussian<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex::new(T::lit(s * gaussian(rng)), T::lit(s * gaussian(rng)))
}

pub fn uniform<T: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: T, hi: T) -> T {
    lo + (hi - lo) * T::lit(rng.random::<f64>())
}

/// Complex Gaussian matrix; real-valued entries only when `complex` is false.
pub fn gaussian_matrix<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    complex: bool,
) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| {
        if complex {
            complex_gaussian(rng)
        } else {
            Complex::new(T::lit(gaussian(rng)), T::zero())
        }
    })
}

/// Gaussian matrix normalized to unit Frobenius norm.
pub fn unit_matrix<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    complex: bool,
) -> Matrix<T> {
    let m = gaussian_matrix(rng, rows, cols, complex);
    let norm = m.frobenius_norm();
    m.scale(T::one() / norm)
}

/// Unitary from modified Gram–Schmidt QR of a Gaussian matrix, with the phases of R's
/// diagonal absorbed so the distribution is Haar.
pub fn unitary<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, complex: bool) -> Matrix<T> {
    let g = gaussian_matrix::<T, _>(rng, n, n, complex);
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| g.col(j)).collect();
    for j in 0..n {
        for k in 0..j {
            let proj = (0..n).fold(Complex::<T>::zero(), |acc, i| {
                acc + cols[k][i].conj() * cols[j][i]
            });
            for i in 0..n {
                let v = cols[k][i];
                cols[j][i] = cols[j][i] - proj * v;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for z in cols[j].iter_mut() {
            *z = *z / norm;
        }
    }
    Matrix::from_fn(n, n, |i, j| cols[j][i])
}

/// `Q diag(λ) Q*` with `λ` uniform in `[lo, hi]` and Haar `Q`.
pub fn hermitian_with_spectrum<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    lo: T,
    hi: T,
    complex: bool,
) -> Hermitian<T> {
    let q = unitary::<T, _>(rng, n, complex);
    let lambda: Vec<T> = (0..n).map(|_| uniform(rng, lo, hi)).collect();
    let m = &(&q * &Matrix::from_diag(&lambda)) * &q.adjoint();
    Hermitian::from_matrix(m).expect("square")
}

/// Gaussian Hermitian matrix `(G + G*)/2`.
pub fn hermitian<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, complex: bool) -> Hermitian<T> {
    Hermitian::from_matrix(gaussian_matrix(rng, n, n, complex)).expect("square")
}

/// Positive definite matrix with spectrum in `[0.1, 3]`.
pub fn positive_definite<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Hermitian<T> {
    hermitian_with_spectrum(rng, n, T::lit(0.1), T::lit(3.0), true)
}

/// Random PSD matrix `G G*` scaled to Frobenius norm `scale`.
pub fn psd<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, scale: T) -> Hermitian<T> {
    let g = gaussian_matrix::<T, _>(rng, n, n, true);
    let p = &g * &g.adjoint();
    let norm = p.frobenius_norm();
    Hermitian::from_matrix(p.scale(scale / norm)).expect("square")
}

pub fn complex_vector<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex<T>> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = trial_rng(1, 0);
        for n in 1..6 {
            let q = unitary::<f64, _>(&mut rng, n, true);
            assert!((&q * &q.adjoint()).distance(&Matrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a: f64 = trial_rng(7, 3).random();
        let b: f64 = trial_rng(7, 3).random();
        let c: f64 = trial_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
