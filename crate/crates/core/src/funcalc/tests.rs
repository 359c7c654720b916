use num_complex::Complex;

use super::*;
use crate::error::Error;
use crate::linalg::random::{self, trial_rng};
use crate::linalg::{apply_scalar_function, Hermitian, Matrix};

fn pow(p: f64, q: f64) -> FunctionSpec<f64> {
    FunctionSpec::exponent_product(vec![p, q]).unwrap()
}

#[test]
fn product_function_gives_kronecker_product() {
    let mut rng = trial_rng(1, 0);
    let a = random::hermitian::<f64, _>(&mut rng, 3, true);
    let b = random::hermitian::<f64, _>(&mut rng, 2, true);
    // t*s is defined on all of R^2 here, so use a custom function without domain restriction.
    let ts = FunctionSpec::custom(CustomFunction::new(
        "ts",
        2,
        |t: &[f64]| t[0] * t[1],
        |_| true,
    ))
    .unwrap();
    let f = func_calc_tensor(&ts, &[a.clone(), b.clone()]).unwrap();
    assert!(f.distance(&a.kron(&b)) < 1e-10);
}

#[test]
fn constant_one_gives_identity() {
    let mut rng = trial_rng(2, 0);
    let a = random::positive_definite::<f64, _>(&mut rng, 3);
    let b = random::positive_definite::<f64, _>(&mut rng, 2);
    let f = func_calc_tensor(&FunctionSpec::constant_one(2), &[a, b]).unwrap();
    assert!(f.distance(&Matrix::identity(6)) < 1e-12);
}

#[test]
fn commuting_scalar_case() {
    let f = func_calc_tensor(
        &pow(0.5, 0.5),
        &[Hermitian::scalar(4.0), Hermitian::scalar(9.0)],
    )
    .unwrap();
    assert!((f[(0, 0)].re - 6.0).abs() < 1e-14);
}

#[test]
fn tensor_calculus_domain_error_lists_tuple() {
    let err = func_calc_tensor(
        &pow(0.5, 0.5),
        &[Hermitian::scalar(-1.0), Hermitian::scalar(2.0)],
    )
    .unwrap_err();
    assert_eq!(
        err,
        Error::SpectrumDomain {
            tuple: vec![-1.0, 2.0]
        }
    );
}

#[test]
fn tensor_calculus_arity_and_capacity() {
    let a = Hermitian::<f64>::identity(2);
    assert!(func_calc_tensor(&pow(0.5, 0.5), &[a.clone()]).is_err());
    let big = Hermitian::<f64>::identity(65);
    assert!(matches!(
        func_calc_tensor(&pow(0.5, 0.5), &[big.clone(), big]),
        Err(Error::CapacityExceeded {
            dim: 4225,
            cap: 4096
        })
    ));
}

#[test]
fn three_variable_product_factorizes() {
    let mut rng = trial_rng(3, 0);
    let xs: Vec<Hermitian<f64>> = (0..3)
        .map(|n| random::positive_definite(&mut rng, n + 1))
        .collect();
    let f = FunctionSpec::exponent_product(vec![0.3, 0.5, 1.2]).unwrap();
    let lhs = func_calc_tensor(&f, &xs).unwrap();
    let g: Vec<Hermitian<f64>> = xs
        .iter()
        .zip([0.3, 0.5, 1.2])
        .map(|(x, p)| apply_scalar_function(x, |t| t.powf(p)).unwrap())
        .collect();
    let rhs = g[0].kron(&g[1]).kron(&g[2]);
    assert!(lhs.distance(&rhs) < 1e-10);
}

#[test]
fn variant_calculus_product_forms() {
    let mut rng = trial_rng(11, 0);
    let a = random::positive_definite::<f64, _>(&mut rng, 3);
    let b = random::positive_definite::<f64, _>(&mut rng, 3);
    let k = random::gaussian_matrix::<f64, _>(&mut rng, 3, 3, true);

    let fk = func_calc_variant(&pow(1.0, 1.0), &a, &b, &k).unwrap();
    assert!(fk.distance(&(&(a.matrix() * &k) * b.matrix())) < 1e-10);

    let half = func_calc_variant(&pow(0.5, 0.5), &a, &b, &k).unwrap();
    let ra = apply_scalar_function(&a, f64::sqrt).unwrap();
    let rb = apply_scalar_function(&b, f64::sqrt).unwrap();
    assert!(half.distance(&(&(ra.matrix() * &k) * rb.matrix())) < 1e-10);

    let q = 0.7;
    let id = func_calc_variant(&pow(0.4, q), &Hermitian::identity(3), &b, &k).unwrap();
    let bq = apply_scalar_function(&b, |s| s.powf(q)).unwrap();
    assert!(id.distance(&(&k * bq.matrix())) < 1e-10);
}

#[test]
fn variant_calculus_shape_error() {
    let a = Hermitian::<f64>::identity(2);
    let b = Hermitian::<f64>::identity(3);
    assert!(matches!(
        func_calc_variant(&pow(1.0, 1.0), &a, &b, &Matrix::zeros(3, 2)),
        Err(Error::Shape(_))
    ));
}

#[test]
fn variant_calculus_is_linear_in_k() {
    let mut rng = trial_rng(12, 0);
    let a = random::positive_definite::<f64, _>(&mut rng, 3);
    let b = random::positive_definite::<f64, _>(&mut rng, 2);
    let k1 = random::gaussian_matrix::<f64, _>(&mut rng, 3, 2, true);
    let k2 = random::gaussian_matrix::<f64, _>(&mut rng, 3, 2, true);
    let (c1, c2) = (Complex::new(0.3, -1.2), Complex::new(-2.0, 0.5));
    let f = FunctionSpec::fraction_product(vec![1.0, 0.5]).unwrap();
    let combo = &k1.scale_complex(c1) + &k2.scale_complex(c2);
    let lhs = func_calc_variant(&f, &a, &b, &combo).unwrap();
    let rhs = &func_calc_variant(&f, &a, &b, &k1)
        .unwrap()
        .scale_complex(c1)
        + &func_calc_variant(&f, &a, &b, &k2)
            .unwrap()
            .scale_complex(c2);
    assert!(lhs.distance(&rhs) < 1e-12);
}

#[test]
fn phi_sends_basis_to_matrix_units() {
    for i in 0..2 {
        for j in 0..3 {
            let e = TensorVector::<f64>::basis(vec![2, 3], &[i, j]).unwrap();
            assert_eq!(phi_map(&e).unwrap(), Matrix::unit(2, 3, i, j));
        }
    }
    assert_eq!(
        phi_map(&TensorVector::<f64>::zeros(vec![2, 2])).unwrap(),
        Matrix::zeros(2, 2)
    );
    assert!(phi_map(&TensorVector::<f64>::zeros(vec![2, 2, 2])).is_err());
}

#[test]
fn phi_is_unitary_and_invertible() {
    let mut rng = trial_rng(5, 0);
    let k = random::gaussian_matrix::<f64, _>(&mut rng, 3, 4, true);
    let phi = phi_inverse(&k);
    let back = phi_map(&phi).unwrap();
    assert_eq!(back, k);
    let hs = back.hs_inner(&back).unwrap();
    let direct: f64 = phi.coeffs().iter().map(|z| z.norm_sqr()).sum();
    assert!((hs.re - direct).abs() < 1e-12);
    assert!(hs.im.abs() < 1e-12);
}

#[test]
fn intertwining_constant_is_exact() {
    let mut rng = trial_rng(6, 0);
    let a = random::positive_definite::<f64, _>(&mut rng, 2);
    let b = random::positive_definite::<f64, _>(&mut rng, 3);
    let phi = phi_inverse(&random::gaussian_matrix::<f64, _>(&mut rng, 2, 3, true));
    assert!(intertwine_check(&FunctionSpec::constant_one(2), &a, &b, &phi).unwrap() < 1e-14);
}

#[test]
fn intertwining_real_product() {
    let mut rng = trial_rng(2, 0);
    let a = random::hermitian_with_spectrum::<f64, _>(&mut rng, 2, 0.1, 3.0, false);
    let b = random::hermitian_with_spectrum::<f64, _>(&mut rng, 2, 0.1, 3.0, false);
    let phi = phi_inverse(&random::gaussian_matrix::<f64, _>(&mut rng, 2, 2, false));
    assert!(intertwine_check(&pow(1.0, 1.0), &a, &b, &phi).unwrap() < 1e-12);
}

#[test]
fn intertwining_complex_pins_conjugation() {
    let mut rng = trial_rng(9, 0);
    let a = random::positive_definite::<f64, _>(&mut rng, 3);
    let b = random::positive_definite::<f64, _>(&mut rng, 3);
    let phi = phi_inverse(&random::gaussian_matrix::<f64, _>(&mut rng, 3, 3, true));
    let f = pow(1.0 / 3.0, 0.5);
    assert!(intertwine_check(&f, &a, &b, &phi).unwrap() < 1e-10);

    // Acting with B itself rather than its conjugate breaks the identity on complex data.
    let wrong = func_calc_tensor(&f, &[a.clone(), b.clone()]).unwrap();
    let lhs =
        phi_map(&TensorVector::new(vec![3, 3], mat_vec(wrong.matrix(), phi.coeffs())).unwrap())
            .unwrap();
    let rhs = func_calc_variant(&f, &a, &b, &phi_map(&phi).unwrap()).unwrap();
    assert!(lhs.distance(&rhs) > 1e-3);
}

#[test]
fn trace_form_examples() {
    let mut rng = trial_rng(4, 0);
    let a = random::positive_definite::<f64, _>(&mut rng, 3);
    let b = random::positive_definite::<f64, _>(&mut rng, 2);
    assert_eq!(
        trace_form(&pow(0.5, 0.5), &a, &b, &Matrix::zeros(2, 3)).unwrap(),
        0.0
    );

    let i2 = Hermitian::<f64>::identity(2);
    let v = trace_form(&pow(1.0, 1.0), &i2, &i2, &Matrix::unit(2, 2, 0, 0)).unwrap();
    assert!((v - 1.0).abs() < 1e-14);

    let k = random::unit_matrix::<f64, _>(&mut rng, 2, 3, true);
    let f = pow(0.3, 0.6);
    let direct = trace_form(&f, &a, &b, &k).unwrap();
    let phi = phi_inverse(&k.adjoint());
    let oracle = tensor_expectation(&f, &a, &b, &phi).unwrap();
    assert!((direct - oracle).abs() < 1e-10);

    // tr A^p K* B^q K
    let ap = apply_scalar_function(&a, |t| t.powf(0.3)).unwrap();
    let bq = apply_scalar_function(&b, |t| t.powf(0.6)).unwrap();
    let lieb = (&(&(ap.matrix() * &k.adjoint()) * bq.matrix()) * &k)
        .trace()
        .re;
    assert!((direct - lieb).abs() < 1e-10);

    assert!(trace_form(&f, &a, &b, &Matrix::zeros(3, 2)).is_err());
}
