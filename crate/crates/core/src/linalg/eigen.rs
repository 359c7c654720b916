//! Cyclic Jacobi eigensolver for complex Hermitian matrices and the
//! spectral machinery built on it.

use num_complex::Complex;
use num_traits::Zero;

use super::hermitian::Hermitian;
use super::matrix::Matrix;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Eigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

fn off_diagonal_norm<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Full eigendecomposition by cyclic complex Jacobi rotations.
pub fn eigh<T: Scalar>(m: &Hermitian<T>, tol: &Tolerances<T>) -> Result<Eigen<T>> {
    let n = m.dim();
    let mut a = m.matrix().clone();
    let mut v = Matrix::<T>::identity(n);
    let threshold = tol.jacobi_relative * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..tol.jacobi_max_sweeps {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let residual = off_diagonal_norm(&a);
        if residual > threshold {
            return Err(Error::NonConvergence {
                sweeps: tol.jacobi_max_sweeps,
                residual: residual.to_f64_lossy(),
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

/// Annihilates `a[p][q]` with the unitary `J = [[c, s e], [-s conj(e)], c]]`, `e = a_pq/|a_pq|`,
/// updating `a <- J* a J` and `v <- v J`.
fn rotate<T: Scalar>(a: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let e = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (r + r);
    let t = if theta.abs() > T::lit(1e150) {
        T::lit(0.5) / theta
    } else {
        let sign = if theta < T::zero() {
            -T::one()
        } else {
            T::one()
        };
        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let cc = Complex::new(c, T::zero());
    let jpq = e * s;
    let jqp = -(e.conj() * s);

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cc + akq * jqp;
        a[(k, q)] = akp * jpq + akq * cc;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cc + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * cc;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cc - aqk * jpq;
        a[(q, k)] = -(apk * jqp) + aqk * cc;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(app - t * r, T::zero());
    a[(q, q)] = Complex::new(aqq + t * r, T::zero());
}

/// Distinct eigenvalues (ascending) and their mutually orthogonal spectral projections.
#[derive(Clone, Debug)]
pub struct SpectralData<T> {
    pub eigenvalues: Vec<T>,
    pub projections: Vec<Hermitian<T>>,
}

impl<T: Scalar> SpectralData<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projections.first().map_or(0, |p| p.dim())
    }

    /// `Σ g(λ_i) P_i`.
    pub fn synthesize(&self, g: impl Fn(T) -> T) -> Result<Hermitian<T>> {
        let n = self.dim();
        let mut acc = Matrix::zeros(n, n);
        for (&lambda, p) in self.eigenvalues.iter().zip(&self.projections) {
            let value = g(lambda);
            if !value.is_finite() {
                return Err(Error::ScalarDomain {
                    eigenvalue: lambda.to_f64_lossy(),
                });
            }
            acc = &acc + &p.scale(value);
        }
        Hermitian::from_matrix(acc)
    }

    pub fn reconstruct(&self) -> Hermitian<T> {
        self.synthesize(|x| x)
            .expect("identity is finite on a finite spectrum")
    }

    /// Worst residuals of idempotence, mutual orthogonality and completeness.
    pub fn projection_residuals(&self) -> ProjectionResiduals<T> {
        let n = self.dim();
        let mut idempotence = T::zero();
        let mut orthogonality = T::zero();
        let mut sum = Matrix::zeros(n, n);
        for (i, p) in self.projections.iter().enumerate() {
            idempotence =
                idempotence.max((&(p.matrix() * p.matrix()) - p.matrix()).frobenius_norm());
            for q in &self.projections[i + 1..] {
                orthogonality = orthogonality.max((p.matrix() * q.matrix()).frobenius_norm());
            }
            sum = &sum + p.matrix();
        }
        ProjectionResiduals {
            idempotence,
            orthogonality,
            completeness: sum.distance(&Matrix::identity(n)),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProjectionResiduals<T> {
    pub idempotence: T,
    pub orthogonality: T,
    pub completeness: T,
}

/// Spectral decomposition with eigenvalues within `cluster_tol` merged into one projection.
pub fn spectral_decompose<T: Scalar>(m: &Hermitian<T>, cluster_tol: T) -> Result<SpectralData<T>> {
    spectral_decompose_with(m, &Tolerances::default().with_cluster(cluster_tol))
}

pub fn spectral_decompose_with<T: Scalar>(
    m: &Hermitian<T>,
    tol: &Tolerances<T>,
) -> Result<SpectralData<T>> {
    if tol.cluster < T::zero() {
        return Err(Error::InvalidParameter(
            "cluster tolerance must be non-negative".into(),
        ));
    }
    let eig = eigh(m, tol)?;
    let n = m.dim();

    // Single-linkage clustering of consecutive sorted eigenvalues.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        match groups.last_mut() {
            Some(g) if eig.values[k] - eig.values[*g.last().unwrap()] <= tol.cluster => g.push(k),
            _ => groups.push(vec![k]),
        }
    }

    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut projections = Vec::with_capacity(groups.len());
    for g in groups {
        let mean = g.iter().map(|&k| eig.values[k]).sum::<T>() / T::from_usize_lossy(g.len());
        let p = Matrix::from_fn(n, n, |i, j| {
            g.iter().fold(Complex::zero(), |acc, &k| {
                acc + eig.vectors[(i, k)] * eig.vectors[(j, k)].conj()
            })
        });
        eigenvalues.push(mean);
        projections.push(Hermitian::from_matrix(p)?);
    }
    Ok(SpectralData {
        eigenvalues,
        projections,
    })
}

/// `g(M) = Σ g(λ_i) P_i`. Non-finite values of `g` are reported as domain errors.
pub fn apply_scalar_function<T: Scalar>(
    m: &Hermitian<T>,
    g: impl Fn(T) -> T,
) -> Result<Hermitian<T>> {
    spectral_decompose_with(m, &Tolerances::default())?.synthesize(g)
}

pub fn eigenvalues<T: Scalar>(m: &Hermitian<T>) -> Result<Vec<T>> {
    Ok(eigh(m, &Tolerances::default())?.values)
}

pub fn min_eigenvalue<T: Scalar>(m: &Hermitian<T>) -> Result<T> {
    Ok(eigenvalues(m)?[0])
}

pub fn max_eigenvalue<T: Scalar>(m: &Hermitian<T>) -> Result<T> {
    Ok(*eigenvalues(m)?.last().expect("dim >= 1"))
}

/// `min_eigenvalue(m) >= -psd_tol`.
pub fn is_psd<T: Scalar>(m: &Hermitian<T>, psd_tol: T) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -psd_tol)
}

/// Inverse of a positive definite (or merely invertible) Hermitian matrix.
pub fn inverse<T: Scalar>(m: &Hermitian<T>) -> Result<Hermitian<T>> {
    apply_scalar_function(m, |x| T::one() / x)
}

/// Principal square root; fails on negative eigenvalues beyond rounding.
pub fn sqrt_psd<T: Scalar>(m: &Hermitian<T>) -> Result<Hermitian<T>> {
    let tol = Tolerances::<T>::default();
    let scale = m.frobenius_norm().max(T::one());
    apply_scalar_function(m, |x| {
        if x < T::zero() && x >= -tol.psd * scale {
            T::zero()
        } else {
            x.sqrt()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> Hermitian<f64> {
        Hermitian::from_diag(d)
    }

    #[test]
    fn identity_has_single_projection() {
        let sd = spectral_decompose(&Hermitian::<f64>::identity(2), 1e-8).unwrap();
        assert_eq!(sd.eigenvalues, vec![1.0]);
        assert!(sd.projections[0].distance(&Matrix::identity(2)) < 1e-15);
    }

    #[test]
    fn diagonal_matrix_decomposes_into_coordinate_projections() {
        let sd = spectral_decompose(&diag(&[2.0, 1.0]), 1e-8).unwrap();
        assert_eq!(sd.eigenvalues, vec![1.0, 2.0]);
        assert!(sd.projections[0].distance(&Matrix::from_diag(&[0.0, 1.0])) < 1e-15);
        assert!(sd.projections[1].distance(&Matrix::from_diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn clustering_merges_close_eigenvalues() {
        let sd = spectral_decompose(&diag(&[1.0, 1.0 + 1e-10, 3.0]), 1e-8).unwrap();
        assert_eq!(sd.len(), 2);
        assert!(sd.projections[0].trace().re - 2.0 < 1e-14);
        let separate = spectral_decompose(&diag(&[1.0, 1.0 + 1e-10, 3.0]), 0.0).unwrap();
        assert_eq!(separate.len(), 3);
        assert!(spectral_decompose(&diag(&[1.0]), -1.0).is_err());
    }

    #[test]
    fn complex_2x2_rotation() {
        let m = Hermitian::from_matrix(
            Matrix::from_vec(
                2,
                2,
                vec![
                    Complex::new(1.0, 0.0),
                    Complex::new(0.0, 2.0),
                    Complex::new(0.0, -2.0),
                    Complex::new(1.0, 0.0),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let e = eigh(&m, &Tolerances::default()).unwrap();
        assert!((e.values[0] + 1.0f64).abs() < 1e-14);
        assert!((e.values[1] - 3.0f64).abs() < 1e-14);
        let recon = &(&e.vectors * &Matrix::from_diag(&e.values)) * &e.vectors.adjoint();
        assert!(recon.distance(m.matrix()) < 1e-13);
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert_eq!(min_eigenvalue(&Hermitian::<f64>::identity(3)).unwrap(), 1.0);
        assert_eq!(min_eigenvalue(&diag(&[-1.0, 5.0])).unwrap(), -1.0);
        // λ² − 4λ + 3 = (λ − 1)(λ − 3)
        let m = Hermitian::<f64>::from_real_rows(&[&[2.0, -1.0], &[-1.0, 2.0]]).unwrap();
        assert!((min_eigenvalue(&m).unwrap() - 1.0).abs() < 1e-14);
        assert!((max_eigenvalue(&m).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_function_examples() {
        let sq = apply_scalar_function(&diag(&[1.0, 2.0]), |t| t * t).unwrap();
        assert!(sq.distance(&Matrix::from_diag(&[1.0, 4.0])) < 1e-14);
        let rt = apply_scalar_function(&diag(&[4.0, 9.0]), f64::sqrt).unwrap();
        assert!(rt.distance(&Matrix::from_diag(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn scalar_function_domain_error_names_eigenvalue() {
        let err = apply_scalar_function(&diag(&[-2.0, 9.0]), f64::sqrt).unwrap_err();
        assert_eq!(err, Error::ScalarDomain { eigenvalue: -2.0 });
    }

    #[test]
    fn non_convergence_reports_residual() {
        let m = Hermitian::<f64>::from_real_rows(&[&[1.0, 1.0], &[1.0, 2.0]]).unwrap();
        let tol = Tolerances {
            jacobi_max_sweeps: 0,
            ..Tolerances::default()
        };
        match eigh(&m, &tol) {
            Err(Error::NonConvergence {
                sweeps: 0,
                residual,
            }) => assert!((residual - 2f64.sqrt()).abs() < 1e-14),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn works_in_single_precision() {
        let m = Hermitian::<f32>::from_real_rows(&[&[2.0, -1.0], &[-1.0, 2.0]]).unwrap();
        let sd = spectral_decompose_with(&m, &Tolerances::default()).unwrap();
        assert_eq!(sd.len(), 2);
        assert!((sd.eigenvalues[0] - 1.0).abs() < 1e-5);
        assert!(sd.reconstruct().distance(m.matrix()) < 1e-5);
    }
}
