use super::quadrature::default_quadrature;
use super::*;
use crate::error::Error;
use crate::funcalc::{phi_map, FunctionSpec, TensorVector};
use crate::linalg::random::trial_rng;
use crate::linalg::Matrix;

fn pow(p: &[f64]) -> FunctionSpec<f64> {
    FunctionSpec::exponent_product(p.to_vec()).unwrap()
}

#[test]
fn t2_values() {
    assert!((t2_counterexample(0.0).unwrap() + 0.0625).abs() < 1e-12);
    assert!(t2_counterexample(0.01).unwrap() < 0.0);
    assert!(t2_counterexample(10.0).unwrap().is_finite());
    assert!(t2_counterexample(-1.0).is_err());
}

#[test]
fn t2_through_generic_quadratic_form_map() {
    let spec = MapSpec::quadratic(square_function(), 2, DEFAULT_WINDOW);
    let out = evaluate_instance(&spec, &t2_instance(0.0)).unwrap();
    assert!((out.margin + 1.0 / 16.0).abs() < 1e-12);
    assert!(out.margin < -1e-9 * out.scale);
}

#[test]
fn equal_points_have_zero_margin_for_every_target() {
    let specs = [
        MapSpec::tensor(
            pow(&[0.5, 0.5]),
            Direction::Concave,
            vec![2, 3],
            DEFAULT_WINDOW,
        ),
        MapSpec::trace(pow(&[0.3, 0.6]), Direction::Concave, (2, 3), DEFAULT_WINDOW),
        MapSpec::quadratic(
            FunctionSpec::resolvent_sum(0.0, vec![0.0], vec![1.0]).unwrap(),
            3,
            DEFAULT_WINDOW,
        ),
        MapSpec::integral(default_quadrature(), (2, 2), DEFAULT_WINDOW),
        MapSpec::two_of_three(None, 1.0, 2.0, (2, 3), DEFAULT_WINDOW),
    ];
    let mut rng = trial_rng(3, 0);
    for spec in &specs {
        let inst = sample_instance(spec, &mut rng);
        let same = Instance {
            x: inst.x.clone(),
            y: inst.x.clone(),
        };
        assert!(
            evaluate_instance(spec, &same).unwrap().margin.abs() < 1e-12,
            "{:?}",
            spec.target
        );
    }
}

#[test]
fn zero_k_or_zero_vector_gives_zero_margin() {
    let mut rng = trial_rng(4, 0);
    let spec = MapSpec::trace(
        FunctionSpec::fraction_product(vec![1.0, 1.0]).unwrap(),
        Direction::Concave,
        (3, 3),
        (0.6, 2.0),
    );
    let mut inst = sample_instance(&spec, &mut rng);
    inst.x[2] = Matrix::zeros(3, 3);
    inst.y[2] = Matrix::zeros(3, 3);
    assert_eq!(evaluate_instance(&spec, &inst).unwrap().margin, 0.0);

    let spec = MapSpec::integral(default_quadrature(), (2, 2), DEFAULT_WINDOW);
    let mut inst = sample_instance(&spec, &mut rng);
    inst.x[2] = Matrix::zeros(2, 2);
    inst.y[2] = Matrix::zeros(2, 2);
    assert_eq!(evaluate_instance(&spec, &inst).unwrap().margin, 0.0);

    let spec = MapSpec::quadratic(
        FunctionSpec::resolvent_sum(0.0, vec![0.0], vec![1.0]).unwrap(),
        2,
        DEFAULT_WINDOW,
    );
    let mut inst = sample_instance(&spec, &mut rng);
    inst.x[1] = Matrix::zeros(2, 1);
    inst.y[1] = Matrix::zeros(2, 1);
    assert_eq!(evaluate_instance(&spec, &inst).unwrap().margin, 0.0);
}

#[test]
fn trace_form_matches_lieb_expression() {
    let mut rng = trial_rng(8, 0);
    let spec = MapSpec::trace(pow(&[0.3, 0.6]), Direction::Concave, (3, 2), DEFAULT_WINDOW);
    let inst = sample_instance(&spec, &mut rng);
    let v = evaluate_map(&spec, &inst.x).unwrap()[(0, 0)].re;
    let a = crate::linalg::Hermitian::from_matrix(inst.x[0].clone()).unwrap();
    let b = crate::linalg::Hermitian::from_matrix(inst.x[1].clone()).unwrap();
    let ap = crate::linalg::apply_scalar_function(&a, |t| t.powf(0.3)).unwrap();
    let bq = crate::linalg::apply_scalar_function(&b, |t| t.powf(0.6)).unwrap();
    let k = &inst.x[2];
    let oracle = (&(&(ap.matrix() * &k.adjoint()) * bq.matrix()) * k)
        .trace()
        .re;
    assert!((v - oracle).abs() < 1e-12);
}

#[test]
fn tensor_half_half_is_concave() {
    let spec = MapSpec::tensor(
        pow(&[0.5, 0.5]),
        Direction::Concave,
        vec![3, 3],
        DEFAULT_WINDOW,
    );
    let r = certify(&spec, &RunOptions::new(200, 42)).unwrap();
    assert_eq!(r.verdict, Verdict::ConcaveConsistent);
    assert_eq!(r.trials, 200);
    assert!(r.worst_relative_margin >= -1e-9);
}

#[test]
fn trace_form_superlinear_exponents_violate() {
    let spec = MapSpec::trace(pow(&[0.6, 0.6]), Direction::Concave, (3, 3), DEFAULT_WINDOW);
    let r = certify(&spec, &RunOptions::search(5000, 1)).unwrap();
    assert_eq!(r.verdict, Verdict::Violation);
    assert!(r.worst_margin < -1e-6);
    let w = r.witness.unwrap();
    assert_eq!(w.dims, vec![1, 1]);
    assert!(w.inputs["x"]["A"]["re"].is_array());
}

#[test]
fn scalar_hessian_oracle_for_exponent_products() {
    // f_tt f_ss − f_ts² = p q (1 − p − q) t^{2p−2} s^{2q−2}: negative iff p + q > 1.
    for (p, q) in [(0.6, 0.6), (0.7, 0.7), (0.5, 0.5), (0.3, 0.6)] {
        let f = pow(&[p, q]);
        let t = [0.8, 1.7];
        let det = f.second_partial(&t, 0, 0).unwrap() * f.second_partial(&t, 1, 1).unwrap()
            - f.second_partial(&t, 0, 1).unwrap().powi(2);
        assert_eq!(det < 0.0, p + q > 1.0);
    }
}

#[test]
fn linear_cell_has_zero_margins() {
    let cells = lieb_sweep(&[1.0], &[0.0], (3, 3), &RunOptions::new(50, 5)).unwrap();
    assert!(cells[0].report.worst_margin.abs() < 1e-10);
    assert_eq!(cells[0].report.verdict, Verdict::ConcaveConsistent);
}

#[test]
fn sweep_pattern() {
    let cells = lieb_sweep(
        &[0.5, 0.7],
        &[0.5, 0.7],
        (3, 3),
        &RunOptions::search(2000, 9),
    )
    .unwrap();
    for c in &cells {
        assert_eq!(
            c.report.verdict.is_violation(),
            c.p + c.q >= 1.2,
            "({}, {})",
            c.p,
            c.q
        );
    }
}

#[test]
fn fraction_trace_window_and_outside_search() {
    let r = fraction_trace_concavity(
        (1.0, 1.0),
        [(0.6, 2.0); 2],
        (3, 3),
        &RunOptions::new(100, 8),
        10_000,
    )
    .unwrap();
    assert_eq!(r.inside.verdict, Verdict::ConcaveConsistent);
    assert_eq!(r.outside.verdict, Verdict::Violation);
}

#[test]
fn fraction_window_outside_domain_rejected() {
    let err = fraction_trace_concavity(
        (1.0, 1.0),
        [(0.3, 2.0), (0.6, 2.0)],
        (2, 2),
        &RunOptions::new(10, 0),
        10,
    )
    .unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}

#[test]
fn reciprocal_examples() {
    let r = reciprocal_convexity(1, 3, &RunOptions::new(100, 2), 0).unwrap();
    assert_eq!(r.product.verdict, Verdict::ConvexConsistent);
    let r = reciprocal_convexity(2, 2, &RunOptions::new(100, 2), 2).unwrap();
    assert_eq!(r.product.verdict, Verdict::ConvexConsistent);
    assert!(r
        .powers
        .iter()
        .all(|c| c.report.verdict == Verdict::ConvexConsistent));

    let spec = MapSpec::tensor(
        FunctionSpec::reciprocal_product(vec![0.0, 0.0]).unwrap(),
        Direction::Convex,
        vec![2, 2],
        DEFAULT_WINDOW,
    );
    let r = certify(&spec, &RunOptions::new(20, 0)).unwrap();
    assert!(r.worst_margin.abs() < 1e-12);
}

#[test]
fn quadratic_form_of_inverse_is_convex() {
    let f = FunctionSpec::resolvent_sum(0.0, vec![0.0], vec![1.0]).unwrap();
    let r = quadratic_form_convexity(f, 3, &RunOptions::new(200, 6)).unwrap();
    assert_eq!(r.verdict, Verdict::ConvexConsistent);
}

#[test]
fn two_of_three_examples() {
    for fixed in [Slot::A, Slot::B, Slot::K] {
        let r = two_of_three(Some(fixed), 1.0, 1.0, (2, 2), &RunOptions::new(200, 11)).unwrap();
        assert_eq!(r.verdict, Verdict::ConvexConsistent, "{fixed:?}");
    }
    let r = two_of_three(None, 1.0, 1.0, (2, 2), &RunOptions::search(5000, 11)).unwrap();
    assert_eq!(r.verdict, Verdict::Violation);
}

#[test]
fn single_node_integral_with_fixed_k() {
    let r = lieb_integral_convexity(
        (2, 2),
        vec![(1.0, 1.0)],
        Some(Slot::K),
        &RunOptions::new(200, 12),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::ConvexConsistent);
}

#[test]
fn bridge_examples() {
    let r = theorem1_bridge(&pow(&[0.5, 0.5]), (2, 2), Direction::Concave, 100, 3).unwrap();
    assert_eq!(r.verdict, Verdict::ConcaveConsistent);
    assert!(r.max_transfer_error <= 1e-10);

    let r = theorem1_bridge(&pow(&[0.7, 0.7]), (1, 1), Direction::Concave, 200, 3).unwrap();
    assert_eq!(r.verdict, Verdict::Violation);
    assert!(r.transferred > 0);
    assert!(r.max_violation_transfer_error <= 1e-10);
}

#[test]
fn basis_tensor_transfers_to_matrix_unit() {
    let phi = TensorVector::<f64>::basis(vec![2, 3], &[1, 2]).unwrap();
    assert_eq!(phi_map(&phi).unwrap(), Matrix::unit(2, 3, 1, 2));
}

#[test]
fn scale_covariance_of_exponent_products() {
    let err = scale_covariance(0.5, 0.5, (3, 3), &RunOptions::new(50, 13), 2.0).unwrap();
    assert!(err <= 1e-8, "{err}");
    let err = scale_covariance(0.3, 0.6, (2, 3), &RunOptions::new(50, 14), 2.0).unwrap();
    assert!(err <= 1e-8, "{err}");
}

#[test]
fn reports_are_reproducible_and_schedule_independent() {
    let spec = MapSpec::trace(pow(&[0.5, 0.5]), Direction::Concave, (3, 2), DEFAULT_WINDOW);
    let opts = RunOptions::new(64, 77);
    let a = certify(&spec, &opts).unwrap();
    let b = certify(&spec, &opts).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let c = pool.install(|| certify(&spec, &opts).unwrap());
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&c).unwrap()
    );
}

#[test]
fn invalid_specs_rejected() {
    let spec = MapSpec::trace(pow(&[0.5]), Direction::Concave, (2, 2), DEFAULT_WINDOW);
    assert!(certify(&spec, &RunOptions::new(1, 0)).is_err());
    let spec = MapSpec::two_of_three(None, 0.0, 1.0, (2, 2), DEFAULT_WINDOW);
    assert!(certify(&spec, &RunOptions::new(1, 0)).is_err());
    let spec = MapSpec::integral(vec![(1.0, -1.0)], (2, 2), DEFAULT_WINDOW);
    assert!(certify(&spec, &RunOptions::new(1, 0)).is_err());
    let spec = MapSpec::tensor(
        FunctionSpec::reciprocal_product(vec![1.0]).unwrap(),
        Direction::Convex,
        vec![2],
        (-1.0, 1.0),
    );
    assert!(certify(&spec, &RunOptions::new(1, 0)).is_err());
}

#[test]
fn report_serializes_with_verdict_strings() {
    let spec = MapSpec::tensor(pow(&[0.5]), Direction::Concave, vec![2], DEFAULT_WINDOW);
    let r = certify(&spec, &RunOptions::new(5, 0)).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["verdict"], "CONCAVE-consistent");
    assert_eq!(v["trials"], 5);
    assert_eq!(v["config"]["function"]["kind"], "exponent_product");
}

#[test]
fn discretized_integral_is_jointly_convex() {
    let r = lieb_integral_convexity(
        (2, 2),
        default_quadrature(),
        None,
        &RunOptions::new(300, 15),
    )
    .unwrap();
    assert_eq!(
        r.verdict,
        Verdict::ConvexConsistent,
        "worst {}",
        r.worst_relative_margin
    );
}
