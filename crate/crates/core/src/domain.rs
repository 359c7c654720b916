//! The concavity domain of `f(t) = Π t_i/(t_i + μ_i)`: the positive tuples `t` at
//! which the matrix with diagonal `2 t_i / μ_i` and off-diagonal `-1` is PSD.

use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, Hermitian, Matrix};
use crate::scalar::Scalar;

/// Poles `μ_1, …, μ_k > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec<T> {
    mu: Vec<T>,
}

impl<T: Scalar> DomainSpec<T> {
    pub fn new(mu: Vec<T>) -> Result<Self> {
        if mu.is_empty() || mu.iter().any(|&m| !(m > T::zero()) || !m.is_finite()) {
            return Err(Error::InvalidParameter(
                "domain needs at least one pole, all > 0".into(),
            ));
        }
        Ok(Self { mu })
    }

    pub fn k(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    fn check_point(&self, t: &[T]) -> Result<()> {
        if t.len() != self.k() {
            return Err(Error::Shape(format!(
                "point of length {} for k = {}",
                t.len(),
                self.k()
            )));
        }
        if t.iter().any(|&x| !(x > T::zero())) {
            return Err(Error::InvalidParameter(
                "domain points must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

/// Diagonal `2 t_i / μ_i`, every off-diagonal entry `-1`.
pub fn build_ak<T: Scalar>(d: &DomainSpec<T>, t: &[T]) -> Result<Hermitian<T>> {
    d.check_point(t)?;
    let k = d.k();
    let two = T::lit(2.0);
    let m = Matrix::from_fn(k, k, |i, j| {
        let x = if i == j {
            two * t[i] / d.mu[i]
        } else {
            -T::one()
        };
        x.into()
    });
    Hermitian::from_matrix(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership<T> {
    pub member: bool,
    /// Smallest eigenvalue of the defining matrix.
    pub margin: T,
}

pub fn domain_contains<T: Scalar>(d: &DomainSpec<T>, t: &[T]) -> Result<Membership<T>> {
    domain_contains_with(d, t, &Tolerances::default())
}

pub fn domain_contains_with<T: Scalar>(
    d: &DomainSpec<T>,
    t: &[T],
    tol: &Tolerances<T>,
) -> Result<Membership<T>> {
    let margin = min_eigenvalue(&build_ak(d, t)?)?;
    Ok(Membership {
        member: margin >= -tol.psd,
        margin,
    })
}

/// Closed-form two-variable test `t_1 t_2 ≥ μ_1 μ_2 / 4`.
pub fn d2_closed_form<T: Scalar>(mu1: T, mu2: T, t1: T, t2: T) -> bool {
    t1 * t2 >= mu1 * mu2 / T::lit(4.0)
}

/// Hessian of `f(t) = Π t_i/(t_i+μ_i)` together with the rank-one factor `P`
/// satisfying `H = -A_k ∘ P`.
#[derive(Debug, Clone)]
pub struct ClassicalHessian<T> {
    pub hessian: Hermitian<T>,
    pub p_factor: Hermitian<T>,
    pub value: T,
}

pub fn classical_hessian<T: Scalar>(d: &DomainSpec<T>, t: &[T]) -> Result<ClassicalHessian<T>> {
    d.check_point(t)?;
    let k = d.k();
    let mu = &d.mu;
    let f = t
        .iter()
        .zip(mu)
        .map(|(&x, &m)| x / (x + m))
        .fold(T::one(), |a, b| a * b);
    let two = T::lit(2.0);
    let hessian = Matrix::from_fn(k, k, |i, j| {
        let x = if i == j {
            -two * mu[i] / (t[i] * (t[i] + mu[i]).powi(2))
        } else {
            mu[i] * mu[j] / (t[i] * t[j] * (t[i] + mu[i]) * (t[j] + mu[j]))
        };
        (f * x).into()
    });
    let p_factor = Matrix::from_fn(k, k, |i, j| {
        (f * mu[i] * mu[j] / (t[i] * t[j] * (t[i] + mu[i]) * (t[j] + mu[j]))).into()
    });
    Ok(ClassicalHessian {
        hessian: Hermitian::from_matrix(hessian)?,
        p_factor: Hermitian::from_matrix(p_factor)?,
        value: f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_eigenvalue, random::trial_rng};
    use proptest::prelude::*;
    use rand::Rng;

    fn dom(mu: &[f64]) -> DomainSpec<f64> {
        DomainSpec::new(mu.to_vec()).unwrap()
    }

    #[test]
    fn ak_examples() {
        let a = build_ak(&dom(&[1.0, 1.0]), &[1.0, 1.0]).unwrap();
        assert_eq!(
            a.matrix(),
            &Matrix::from_real_rows(&[&[2.0, -1.0], &[-1.0, 2.0]])
        );
        let a = build_ak(&dom(&[2.0]), &[3.0]).unwrap();
        assert_eq!(a.matrix(), &Matrix::from_real_rows(&[&[3.0]]));
        let a = build_ak(&dom(&[1.0, 2.0, 3.0]), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(
            a.matrix(),
            &Matrix::from_real_rows(&[&[2.0, -1.0, -1.0], &[-1.0, 2.0, -1.0], &[-1.0, -1.0, 2.0]])
        );
    }

    #[test]
    fn nonpositive_points_rejected() {
        assert!(build_ak(&dom(&[1.0, 1.0]), &[0.0, 1.0]).is_err());
        assert!(domain_contains(&dom(&[1.0]), &[-1.0]).is_err());
        assert!(DomainSpec::<f64>::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn membership_examples() {
        let m = domain_contains(&dom(&[1.0, 1.0]), &[0.5, 0.5]).unwrap();
        assert!(m.member);
        assert!(m.margin.abs() < 1e-14);
        assert!(
            !domain_contains(&dom(&[1.0, 1.0]), &[0.4, 0.5])
                .unwrap()
                .member
        );
        for t in [1e-6, 0.3, 7.0] {
            assert!(domain_contains(&dom(&[2.5]), &[t]).unwrap().member);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert!(d2_closed_form(1.0, 1.0, 0.5, 0.5));
        assert!(!d2_closed_form(2.0, 2.0, 1.0, 0.9));
    }

    #[test]
    fn closed_form_agrees_with_eigenvalue_test() {
        let mut rng = trial_rng(31, 0);
        let d = dom(&[1.0, 1.0]);
        let mut disagreements = 0;
        for _ in 0..10_000 {
            let t = [rng.random_range(1e-9..3.0), rng.random_range(1e-9..3.0)];
            if d2_closed_form(1.0, 1.0, t[0], t[1]) != domain_contains(&d, &t).unwrap().member {
                disagreements += 1;
            }
        }
        assert_eq!(disagreements, 0);
    }

    #[test]
    fn scalar_hessian_matches_second_derivative() {
        // (t/(t+1))'' = -2/(t+1)^3 = -1/4 at t = 1
        let h = classical_hessian(&dom(&[1.0]), &[1.0]).unwrap();
        assert!((h.hessian[(0, 0)].re + 0.25).abs() < 1e-15);
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let d = dom(&[0.7, 1.3, 2.0]);
        let t = [0.9, 1.7, 0.4];
        let f = |x: &[f64]| {
            x.iter()
                .zip(d.mu())
                .map(|(&a, &m)| a / (a + m))
                .product::<f64>()
        };
        let h = classical_hessian(&d, &t).unwrap();
        let e = 1e-4;
        for i in 0..3 {
            for j in 0..3 {
                let shifted = |si: f64, sj: f64| {
                    let mut x = t;
                    x[i] += si;
                    x[j] += sj;
                    f(&x)
                };
                let fd = (shifted(e, e) - shifted(e, -e) - shifted(-e, e) + shifted(-e, -e))
                    / (4.0 * e * e);
                assert!((fd - h.hessian[(i, j)].re).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn boundary_point_is_nsd() {
        let h = classical_hessian(&dom(&[1.0, 1.0]), &[0.5, 0.5]).unwrap();
        assert!(max_eigenvalue(&h.hessian).unwrap() <= 1e-12);
        assert!(max_eigenvalue(&h.hessian).unwrap() > -1e-12);
    }

    #[test]
    fn hadamard_factorization_and_inverse() {
        let d = dom(&[0.5, 1.5, 1.0]);
        for t in [[0.3, 0.7, 2.0], [1.0, 1.0, 1.0], [5.0, 0.1, 0.2]] {
            let h = classical_hessian(&d, &t).unwrap();
            let ak = build_ak(&d, &t).unwrap();
            let rebuilt = (-ak.matrix()).hadamard(h.p_factor.matrix()).unwrap();
            assert!(rebuilt.max_abs_diff(h.hessian.matrix()) < 1e-12);
            let p_inv = h.p_factor.map(|z| z.inv());
            let back = (-h.hessian.matrix()).hadamard(&p_inv).unwrap();
            assert!(back.max_abs_diff(ak.matrix()) < 1e-10);
            assert!(min_eigenvalue(&h.p_factor).unwrap() >= -1e-12);
        }
    }

    proptest! {
        #[test]
        fn domain_is_midpoint_convex(
            mu in prop::collection::vec(0.2f64..3.0, 3),
            s in prop::collection::vec(0.01f64..4.0, 3),
            u in prop::collection::vec(0.01f64..4.0, 3),
        ) {
            let d = DomainSpec::new(mu).unwrap();
            let a = domain_contains(&d, &s).unwrap();
            let b = domain_contains(&d, &u).unwrap();
            prop_assume!(a.member && b.member);
            let mid: Vec<f64> = s.iter().zip(&u).map(|(x, y)| 0.5 * (x + y)).collect();
            prop_assert!(domain_contains(&d, &mid).unwrap().margin >= -1e-10);
        }

        #[test]
        fn domain_is_closed_under_upward_rays(
            mu in prop::collection::vec(0.2f64..3.0, 3),
            t in prop::collection::vec(0.01f64..4.0, 3),
            c in 1.0f64..10.0,
        ) {
            let d = DomainSpec::new(mu).unwrap();
            prop_assume!(domain_contains(&d, &t).unwrap().member);
            let scaled: Vec<f64> = t.iter().map(|x| c * x).collect();
            prop_assert!(domain_contains(&d, &scaled).unwrap().member);
        }

        #[test]
        fn concave_inside_not_outside(
            mu in prop::collection::vec(0.2f64..3.0, 2..4),
            t in prop::collection::vec(0.01f64..3.0, 4),
        ) {
            let d = DomainSpec::new(mu).unwrap();
            let t = &t[..d.k()];
            let m = domain_contains(&d, t).unwrap();
            let h = classical_hessian(&d, t).unwrap();
            let top = max_eigenvalue(&h.hessian).unwrap();
            if m.member {
                prop_assert!(top <= 1e-10);
            } else if m.margin < -0.1 {
                prop_assert!(top > 1e-9, "top eigenvalue {top} at margin {}", m.margin);
            }
        }
    }
}
