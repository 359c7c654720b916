//! Acceptance batteries run by `opconvex suite`.

use anyhow::Result;
use clap::ValueEnum;
use rand::Rng;
use serde_json::json;

use opconvex::certify::{
    self, certify, fraction_trace_concavity, lieb_integral_convexity, quadratic_form_convexity,
    reciprocal_convexity, scale_covariance, t2_counterexample, theorem1_bridge, two_of_three,
    ConvexityReport, Direction, MapSpec, RunOptions, Slot, Verdict, DEFAULT_WINDOW,
};
use opconvex::domain::{
    build_ak, classical_hessian, d2_closed_form, domain_contains, domain_contains_with,
};
use opconvex::funcalc::{
    func_calc_tensor, func_calc_variant, intertwine_check, phi_inverse, phi_map,
    tensor_expectation, trace_form, CustomFunction, TensorVector,
};
use opconvex::hessian::{
    closed_form_hessian_fraction, closed_form_hessian_reciprocal, generalized_hessian,
    hessian_scan, ScanMode, ScanVerdict,
};
use opconvex::json::matrix_to_value;
use opconvex::linalg::random::{
    complex_vector, hermitian, hermitian_with_spectrum, positive_definite, psd, trial_rng,
    unit_matrix,
};
use opconvex::linalg::{max_eigenvalue, spectral_decompose, Matrix};
use opconvex::means::{
    block_margin, geometric_mean, gm_concavity_margin, gm_maximality_probe, gm_monotonicity_margin,
    harmonic_block_check, harmonic_mean, product_mean, ProbeConfig,
};
use opconvex::{DataSetGrid, DomainSpec, FunctionSpec, HermitianMatrix, Tolerances};

use crate::report::{CheckResult, SuiteResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    All,
    Funcalc,
    Means,
    Domain,
    Hessian,
    Certify,
}

impl SuiteName {
    pub fn expand(self) -> Vec<SuiteName> {
        match self {
            SuiteName::All => {
                vec![
                    SuiteName::Funcalc,
                    SuiteName::Means,
                    SuiteName::Domain,
                    SuiteName::Hessian,
                    SuiteName::Certify,
                ]
            }
            s => vec![s],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::All => "all",
            SuiteName::Funcalc => "funcalc",
            SuiteName::Means => "means",
            SuiteName::Domain => "domain",
            SuiteName::Hessian => "hessian",
            SuiteName::Certify => "certify",
        }
    }
}

/// Runs a check, turning errors into a failed check that records the message.
fn check(id: &str, anchor: &str, body: impl FnOnce() -> Result<CheckResult>) -> CheckResult {
    body().unwrap_or_else(|e| {
        CheckResult::new(id, anchor, false, f64::NAN)
            .with_witness(json!({ "error": e.to_string() }))
    })
}

/// Identity check: passes when the discrepancy is at most `tol`; margin is `−discrepancy`.
fn identity(id: &str, anchor: &str, discrepancy: f64, tol: f64) -> CheckResult {
    CheckResult::new(id, anchor, discrepancy <= tol, 0.0 - discrepancy + 0.0)
}

fn consistent(id: &str, anchor: &str, r: &ConvexityReport) -> CheckResult {
    CheckResult::new(id, anchor, !r.verdict.is_violation(), r.worst_margin).with_witness(summary(r))
}

fn violating(id: &str, anchor: &str, r: &ConvexityReport) -> CheckResult {
    CheckResult::new(id, anchor, r.verdict.is_violation(), r.worst_margin).with_witness(summary(r))
}

fn summary(r: &ConvexityReport) -> serde_json::Value {
    json!({
        "verdict": r.verdict,
        "trials": r.trials,
        "violations": r.violations,
        "worst_relative_margin": r.worst_relative_margin,
        "witness": r.witness,
    })
}

pub fn run_suite(name: SuiteName, seed: u64) -> Vec<SuiteResult> {
    name.expand()
        .into_iter()
        .map(|s| {
            let checks = match s {
                SuiteName::Funcalc => funcalc_suite(seed),
                SuiteName::Means => means_suite(seed),
                SuiteName::Domain => domain_suite(seed),
                SuiteName::Hessian => hessian_suite(seed),
                SuiteName::Certify => certify_suite(seed),
                SuiteName::All => unreachable!("expanded"),
            };
            SuiteResult {
                name: s.as_str().into(),
                checks,
            }
        })
        .collect()
}

/// Two-variable functions of every kind, with the one-variable resolvent combination
/// entering as the product `r(t) r(s)`.
pub fn two_variable_functions() -> Vec<FunctionSpec> {
    let r = FunctionSpec::resolvent_sum(0.5, vec![0.0, 1.5], vec![1.0, 0.7]).expect("valid");
    vec![
        FunctionSpec::exponent_product(vec![0.5, 0.5]).expect("valid"),
        FunctionSpec::exponent_product(vec![0.7, 1.3]).expect("valid"),
        FunctionSpec::fraction_product(vec![1.0, 0.5]).expect("valid"),
        FunctionSpec::reciprocal_product(vec![1.0, 0.5]).expect("valid"),
        FunctionSpec::custom(CustomFunction::new(
            "resolvent product",
            2,
            move |t: &[f64]| r.eval(&t[..1]) * r.eval(&t[1..]),
            |t| t.iter().all(|&x| x > 0.0),
        ))
        .expect("valid"),
        FunctionSpec::custom(CustomFunction::new(
            "1/(t+s)",
            2,
            |t: &[f64]| 1.0 / (t[0] + t[1]),
            |t| t[0] + t[1] > 0.0,
        ))
        .expect("valid"),
    ]
}

fn funcalc_suite(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(check(
        "spectral_reconstruction",
        "A = Σ λ_i P_i with orthogonal projections",
        || {
            let m: HermitianMatrix = hermitian(&mut trial_rng(seed, 0), 5, true);
            let s = spectral_decompose(&m, 1e-8)?;
            let r = s.projection_residuals();
            let err = s
                .reconstruct()
                .distance(&m)
                .max(r.idempotence)
                .max(r.orthogonality)
                .max(r.completeness);
            Ok(identity(
                "spectral_reconstruction",
                "A = Σ λ_i P_i with orthogonal projections",
                err,
                1e-9,
            ))
        },
    ));
    out.push(check(
        "separable_tensor_calculus",
        "f(A,B) = g(A) ⊗ h(B) for f = g(t) h(s)",
        || {
            let mut rng = trial_rng(seed, 1);
            let a: HermitianMatrix = hermitian_with_spectrum(&mut rng, 2, 0.1, 3.0, true);
            let b = hermitian_with_spectrum(&mut rng, 3, 0.1, 3.0, true);
            let f = FunctionSpec::exponent_product(vec![1.0, 1.0])?;
            let err = func_calc_tensor(&f, &[a.clone(), b.clone()])?.distance(&a.kron(&b));
            Ok(identity(
                "separable_tensor_calculus",
                "f(A,B) = g(A) ⊗ h(B) for f = g(t) h(s)",
                err,
                1e-10,
            ))
        },
    ));

    let anchor_trace = "tr f(A,B)(K*)K = (f(A,B)φ|φ) with K* = Φφ";
    let anchor_intertwine = "Φ f(A,B) = f(A,B) Φ on H₁ ⊗ conj(H₂)";
    let fs = two_variable_functions();
    let mut trace_err: f64 = 0.0;
    let mut intertwine_err: f64 = 0.0;
    let mut failure = None;
    for i in 0..200u64 {
        let mut rng = trial_rng(seed, 100 + i);
        let f = &fs[i as usize % fs.len()];
        let (n, m) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let a: HermitianMatrix = hermitian_with_spectrum(&mut rng, n, 0.1, 3.0, true);
        let b = hermitian_with_spectrum(&mut rng, m, 0.1, 3.0, true);
        let k = unit_matrix(&mut rng, m, n, true);
        let phi = phi_inverse(&k.adjoint());
        let res = (|| -> opconvex::Result<(f64, f64)> {
            let gap = (trace_form(f, &a, &b, &k)? - tensor_expectation(f, &a, &b, &phi)?).abs();
            Ok((gap, intertwine_check(f, &a, &b, &phi)?))
        })();
        match res {
            Ok((g, e)) => {
                trace_err = trace_err.max(g);
                intertwine_err = intertwine_err.max(e);
            }
            Err(e) => failure = Some(e.to_string()),
        }
    }
    match failure {
        None => {
            out.push(identity("trace_identity", anchor_trace, trace_err, 1e-10));
            out.push(identity(
                "intertwining",
                anchor_intertwine,
                intertwine_err,
                1e-10,
            ));
        }
        Some(e) => {
            for (id, anchor) in [
                ("trace_identity", anchor_trace),
                ("intertwining", anchor_intertwine),
            ] {
                out.push(
                    CheckResult::new(id, anchor, false, f64::NAN)
                        .with_witness(json!({ "error": e })),
                );
            }
        }
    }

    out.push(check(
        "phi_unitary",
        "Φ is unitary and maps basis tensors to matrix units",
        || {
            let mut rng = trial_rng(seed, 2);
            let coeffs = complex_vector(&mut rng, 12);
            let phi = TensorVector::<f64>::new(vec![3, 4], coeffs)?;
            let mut err: f64 = (phi_map(&phi)?.frobenius_norm() - phi.norm()).abs();
            let basis = TensorVector::<f64>::basis(vec![3, 4], &[2, 1])?;
            err = err.max(phi_map(&basis)?.distance(&Matrix::unit(3, 4, 2, 1)));
            Ok(identity(
                "phi_unitary",
                "Φ is unitary and maps basis tensors to matrix units",
                err,
                1e-12,
            ))
        },
    ));
    out.push(check(
        "variant_linearity",
        "K ↦ f(A,B)(K) is linear",
        || {
            let mut rng = trial_rng(seed, 3);
            let a: HermitianMatrix = hermitian_with_spectrum(&mut rng, 3, 0.1, 3.0, true);
            let b = hermitian_with_spectrum(&mut rng, 2, 0.1, 3.0, true);
            let k1 = unit_matrix(&mut rng, 3, 2, true);
            let k2 = unit_matrix(&mut rng, 3, 2, true);
            let f = FunctionSpec::fraction_product(vec![1.0, 2.0])?;
            let lhs = func_calc_variant(&f, &a, &b, &(&k1.scale(2.0) + &k2))?;
            let rhs = &func_calc_variant(&f, &a, &b, &k1)?.scale(2.0)
                + &func_calc_variant(&f, &a, &b, &k2)?;
            Ok(identity(
                "variant_linearity",
                "K ↦ f(A,B)(K) is linear",
                lhs.distance(&rhs),
                1e-10,
            ))
        },
    ));
    out
}

fn means_suite(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(check(
        "gm_commuting",
        "A # B = (AB)^{1/2} for commuting A, B",
        || {
            let g = geometric_mean(
                &HermitianMatrix::from_diag(&[4.0, 1.0]),
                &HermitianMatrix::from_diag(&[9.0, 1.0]),
            )?;
            let err = g.distance(&HermitianMatrix::from_diag(&[6.0, 1.0]));
            Ok(identity(
                "gm_commuting",
                "A # B = (AB)^{1/2} for commuting A, B",
                err,
                1e-10,
            ))
        },
    ));

    let mut mono: f64 = f64::INFINITY;
    let mut conc: f64 = f64::INFINITY;
    let mut block: f64 = f64::INFINITY;
    let mut harm: f64 = f64::INFINITY;
    let pairs = (|| -> opconvex::Result<()> {
        for i in 0..200u64 {
            let mut rng = trial_rng(seed, 200 + i);
            let n = rng.random_range(1..=4);
            let a1: HermitianMatrix = positive_definite(&mut rng, n);
            let b1 = positive_definite(&mut rng, n);
            let a2 = positive_definite(&mut rng, n);
            let b2 = positive_definite(&mut rng, n);
            let a_up = a1.add(&psd(&mut rng, n, 1.0))?;
            let b_up = b1.add(&psd(&mut rng, n, 1.0))?;
            mono = mono.min(gm_monotonicity_margin(&a1, &b1, &a_up, &b_up)?);
            conc = conc.min(gm_concavity_margin(&a1, &b1, &a2, &b2)?);
            block = block.min(block_margin(&a1, &geometric_mean(&a1, &b1)?, &b1)?);
            harm = harm.min(harmonic_block_check(&a1, &b1)?.min());
        }
        Ok(())
    })();
    let rows = [
        (
            "gm_monotone",
            "A₁ ⪯ A₂, B₁ ⪯ B₂ ⇒ A₁ # B₁ ⪯ A₂ # B₂",
            mono,
            1e-9,
        ),
        ("gm_concave", "(A, B) ↦ A # B is concave", conc, 1e-9),
        ("gm_block_psd", "[[A, A#B], [A#B, B]] ⪰ 0", block, 1e-9),
        (
            "harmonic_block",
            "harmonic mean block inequalities",
            harm,
            1e-10,
        ),
    ];
    for (id, anchor, margin, tol) in rows {
        out.push(match &pairs {
            Ok(()) => CheckResult::new(id, anchor, margin >= -tol, margin),
            Err(e) => CheckResult::new(id, anchor, false, f64::NAN)
                .with_witness(json!({ "error": e.to_string() })),
        });
    }

    out.push(check(
        "gm_maximality",
        "A # B is the largest C with [[A, C], [C, B]] ⪰ 0",
        || {
            let mut rng = trial_rng(seed, 4);
            let a: HermitianMatrix = positive_definite(&mut rng, 3);
            let b = positive_definite(&mut rng, 3);
            let r = gm_maximality_probe(
                &a,
                &b,
                &ProbeConfig {
                    seed,
                    trials: 1000,
                    ..Default::default()
                },
            )?;
            let anchor = "A # B is the largest C with [[A, C], [C, B]] ⪰ 0";
            Ok(CheckResult::new(
                "gm_maximality",
                anchor,
                r.violations == 0,
                r.worst_margin.unwrap_or(0.0),
            )
            .with_witness(serde_json::to_value(&r)?))
        },
    ));
    out.push(check(
        "harmonic_scalar",
        "2(a⁻¹ + b⁻¹)⁻¹ for a = 1, b = 3",
        || {
            let h = harmonic_mean(&HermitianMatrix::scalar(1.0), &HermitianMatrix::scalar(3.0))?;
            Ok(identity(
                "harmonic_scalar",
                "2(a⁻¹ + b⁻¹)⁻¹ for a = 1, b = 3",
                (h[(0, 0)].re - 1.5).abs(),
                1e-12,
            ))
        },
    ));
    out.push(check(
        "product_mean_identity",
        "(A ⊗ I) # (I ⊗ B) = A^{1/2} ⊗ B^{1/2}",
        || {
            let f = FunctionSpec::exponent_product(vec![1.0, 0.0])?;
            let g = FunctionSpec::exponent_product(vec![0.0, 1.0])?;
            let h = FunctionSpec::exponent_product(vec![0.5, 0.5])?;
            let mut err: f64 = 0.0;
            for i in 0..20 {
                let mut rng = trial_rng(seed, 300 + i);
                let xs = [
                    positive_definite(&mut rng, 3),
                    positive_definite(&mut rng, 2),
                ];
                let lhs: HermitianMatrix = product_mean(&f, &g, &xs)?;
                err = err.max(lhs.distance(func_calc_tensor(&h, &xs)?.matrix()));
            }
            Ok(identity(
                "product_mean_identity",
                "(A ⊗ I) # (I ⊗ B) = A^{1/2} ⊗ B^{1/2}",
                err,
                1e-9,
            ))
        },
    ));
    out
}

fn domain_suite(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let tol = Tolerances::default().with_psd(1e-10);
    for (i, (m1, m2)) in [(1.0, 1.0), (0.5, 2.0), (2.0, 3.0)].into_iter().enumerate() {
        let id = format!("d2_cross_check_{i}");
        let anchor = "D₂(μ₁, μ₂) = {t₁ t₂ ≥ μ₁ μ₂ / 4}";
        out.push(check(&id, anchor, || {
            let d = DomainSpec::new(vec![m1, m2])?;
            let mut rng = trial_rng(seed, 400 + i as u64);
            let count = 10_000;
            let mut mismatches = 0usize;
            for _ in 0..count {
                let t1 = 3.0 * (1.0 - rng.random::<f64>());
                let t2 = 3.0 * (1.0 - rng.random::<f64>());
                mismatches += (domain_contains_with(&d, &[t1, t2], &tol)?.member
                    != d2_closed_form(m1, m2, t1, t2)) as usize;
            }
            Ok(
                CheckResult::new(&id, anchor, mismatches == 0, -(mismatches as f64) + 0.0)
                    .with_witness(
                        json!({ "mu": [m1, m2], "count": count, "mismatches": mismatches }),
                    ),
            )
        }));
    }
    out.push(check(
        "membership_example",
        "A_k ⪰ 0 on the boundary point t = (½, ½), μ = (1, 1)",
        || {
            let d = DomainSpec::new(vec![1.0, 1.0])?;
            let t = [0.5, 0.5];
            let m = domain_contains(&d, &t)?;
            let outside = domain_contains(&d, &[0.4, 0.4])?;
            let anchor = "A_k ⪰ 0 on the boundary point t = (½, ½), μ = (1, 1)";
            Ok(CheckResult::new(
                "membership_example",
                anchor,
                m.member && !outside.member,
                m.margin,
            )
            .with_witness(json!({
                "mu": [1.0, 1.0],
                "point": t,
                "member": m.member,
                "A_k": matrix_to_value(build_ak(&d, &t)?.matrix()),
            })))
        },
    ));
    out.push(check(
        "hadamard_factorization",
        "∇²f = −A_k ∘ P with P ⪰ 0 of rank one",
        || {
            let mut rng = trial_rng(seed, 5);
            let mut err: f64 = 0.0;
            for _ in 0..100 {
                let k = rng.random_range(1..=4);
                let mu: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..3.0)).collect();
                let t: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..3.0)).collect();
                let d = DomainSpec::new(mu)?;
                let c = classical_hessian(&d, &t)?;
                let rebuilt = build_ak(&d, &t)?
                    .matrix()
                    .hadamard(c.p_factor.matrix())?
                    .scale(-1.0);
                err = err.max(rebuilt.max_abs_diff(&c.hessian));
            }
            Ok(identity(
                "hadamard_factorization",
                "∇²f = −A_k ∘ P with P ⪰ 0 of rank one",
                err,
                1e-12,
            ))
        },
    ));
    out
}

fn random_grid<R: Rng>(rng: &mut R, k: usize, lo: f64, hi: f64) -> opconvex::Result<DataSetGrid> {
    let nodes = (0..k)
        .map(|_| {
            (0..rng.random_range(1..=4))
                .map(|_| rng.random_range(lo..hi))
                .collect()
        })
        .collect();
    DataSetGrid::from_unsorted(nodes, 1e-6)
}

fn hessian_suite(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(check(
        "reciprocal_scalar",
        "generalized Hessian of 1/t on {1, 2}",
        || {
            let g = DataSetGrid::new(vec![vec![1.0, 2.0]])?;
            let h = generalized_hessian(&FunctionSpec::reciprocal_product(vec![1.0])?, &g, &[0])?;
            let err = h
                .matrix
                .max_abs_diff(&Matrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 0.5]]));
            Ok(identity(
                "reciprocal_scalar",
                "generalized Hessian of 1/t on {1, 2}",
                err,
                1e-12,
            ))
        },
    ));
    out.push(check(
        "fraction_scalar",
        "f''(1) = −¼ for f(t) = t/(t+1)",
        || {
            let g = DataSetGrid::new(vec![vec![1.0]])?;
            let (h, _) = closed_form_hessian_fraction(&[1.0], &g, &[0])?;
            Ok(identity(
                "fraction_scalar",
                "f''(1) = −¼ for f(t) = t/(t+1)",
                (h.matrix[(0, 0)].re + 0.25).abs(),
                1e-15,
            ))
        },
    ));
    out.push(check(
        "engine_vs_closed_form",
        "divided-difference Hessian equals the closed forms",
        || {
            let mut rng = trial_rng(seed, 6);
            let (mut err, mut had): (f64, f64) = (0.0, 0.0);
            for _ in 0..20 {
                let k = rng.random_range(1..=3);
                let grid = random_grid(&mut rng, k, 0.05, 4.0)?;
                let mu: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..3.0)).collect();
                let frac = FunctionSpec::fraction_product(mu.clone())?;
                let recip = FunctionSpec::reciprocal_product(vec![1.0; k])?;
                for m in grid.multi_indices() {
                    let (c, factors) = closed_form_hessian_fraction(&mu, &grid, &m)?;
                    err = err.max(
                        generalized_hessian(&frac, &grid, &m)?
                            .matrix
                            .distance(&c.matrix),
                    );
                    had = had.max(
                        factors
                            .neg_ak
                            .hadamard(factors.outer.matrix())?
                            .max_abs_diff(&c.matrix),
                    );
                    let c = closed_form_hessian_reciprocal(&grid, &m)?;
                    err = err.max(
                        generalized_hessian(&recip, &grid, &m)?
                            .matrix
                            .distance(&c.matrix),
                    );
                }
            }
            let anchor = "divided-difference Hessian equals the closed forms";
            Ok(CheckResult::new(
                "engine_vs_closed_form",
                anchor,
                err <= 1e-9 && had <= 1e-12,
                -err.max(had),
            ))
        },
    ));
    out.push(check(
        "reciprocal_psd_scan",
        "Hessians of 1/(t₁⋯t_k) are PSD on positive grids",
        || {
            let mut rng = trial_rng(seed, 7);
            let grid = random_grid(&mut rng, 2, 0.05, 5.0)?;
            let r = hessian_scan(
                &FunctionSpec::reciprocal_product(vec![1.0, 1.0])?,
                &grid,
                ScanMode::Psd,
            )?;
            let anchor = "Hessians of 1/(t₁⋯t_k) are PSD on positive grids";
            Ok(CheckResult::new(
                "reciprocal_psd_scan",
                anchor,
                r.verdict == ScanVerdict::Pass,
                r.worst_eigenvalue,
            ))
        },
    ));
    out.push(check(
        "fraction_nsd_scan",
        "Hessians of Π tᵢ/(tᵢ+μᵢ) are NSD on grids inside D_k",
        || {
            let grid = DataSetGrid::new(vec![vec![0.6, 1.0, 1.7], vec![0.6, 1.0]])?;
            let r = hessian_scan(
                &FunctionSpec::fraction_product(vec![1.0, 1.0])?,
                &grid,
                ScanMode::Nsd,
            )?;
            let anchor = "Hessians of Π tᵢ/(tᵢ+μᵢ) are NSD on grids inside D_k";
            Ok(CheckResult::new(
                "fraction_nsd_scan",
                anchor,
                r.verdict == ScanVerdict::Pass,
                -r.worst_eigenvalue,
            ))
        },
    ));
    out.push(check(
        "fraction_outside_fails",
        "positive Hessian eigenvalue at points outside D_k",
        || {
            let grid = DataSetGrid::new(vec![vec![0.3, 0.5], vec![0.3, 0.5]])?;
            let r = hessian_scan(
                &FunctionSpec::fraction_product(vec![1.0, 1.0])?,
                &grid,
                ScanMode::Nsd,
            )?;
            let h = generalized_hessian(
                &FunctionSpec::fraction_product(vec![1.0, 1.0])?,
                &grid,
                &[0, 0],
            )?;
            let top = max_eigenvalue(&h.matrix)?;
            let anchor = "positive Hessian eigenvalue at points outside D_k";
            Ok(CheckResult::new(
                "fraction_outside_fails",
                anchor,
                r.verdict == ScanVerdict::Fail && top > 1e-9,
                top,
            )
            .with_witness(
                json!({ "worst_index": r.worst_index, "worst_eigenvalue": r.worst_eigenvalue }),
            ))
        },
    ));
    out
}

fn pow(p: f64, q: f64) -> opconvex::Result<FunctionSpec> {
    FunctionSpec::exponent_product(vec![p, q])
}

fn certify_suite(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let opts = RunOptions::new(300, seed);
    let search = RunOptions::search(5_000, seed);
    out.push(check(
        "t2_counterexample",
        "(A, ξ) ↦ (A²ξ|ξ) is not jointly convex: gap −1/16",
        || {
            let v = t2_counterexample(0.0)?;
            let anchor = "(A, ξ) ↦ (A²ξ|ξ) is not jointly convex: gap −1/16";
            Ok(CheckResult::new(
                "t2_counterexample",
                anchor,
                (v + 0.0625).abs() <= 1e-12,
                v,
            ))
        },
    ));
    out.push(check(
        "t2_perturbed",
        "the t² gap stays negative under a small shift",
        || {
            let v = t2_counterexample(0.01)?;
            Ok(CheckResult::new(
                "t2_perturbed",
                "the t² gap stays negative under a small shift",
                v < 0.0,
                v,
            ))
        },
    ));
    for (p, q) in [(0.5, 0.5), (0.3, 0.6), (1.0, 0.0)] {
        let id = format!("lieb_concave_{p}_{q}");
        let anchor = "tr A^p K* B^q K is concave for p, q ≥ 0, p + q ≤ 1";
        out.push(check(&id, anchor, || {
            let r = certify(
                &MapSpec::trace(pow(p, q)?, Direction::Concave, (3, 3), DEFAULT_WINDOW),
                &opts,
            )?;
            Ok(consistent(&id, anchor, &r))
        }));
    }
    out.push(check(
        "lieb_violation_0.7_0.7",
        "tr A^p K* B^q K is not concave for p + q > 1",
        || {
            let r = certify(
                &MapSpec::trace(pow(0.7, 0.7)?, Direction::Concave, (3, 3), DEFAULT_WINDOW),
                &search,
            )?;
            Ok(violating(
                "lieb_violation_0.7_0.7",
                "tr A^p K* B^q K is not concave for p + q > 1",
                &r,
            ))
        },
    ));
    out.push(check(
        "tensor_exponent_simplex",
        "A^p ⊗ B^q is concave for p + q ≤ 1",
        || {
            let spec = MapSpec::tensor(
                pow(0.5, 0.5)?,
                Direction::Concave,
                vec![3, 3],
                DEFAULT_WINDOW,
            );
            Ok(consistent(
                "tensor_exponent_simplex",
                "A^p ⊗ B^q is concave for p + q ≤ 1",
                &certify(&spec, &opts)?,
            ))
        },
    ));
    out.push(check(
        "fraction_trace_inside",
        "fraction trace form is concave on D₂",
        || {
            let r = fraction_trace_concavity((1.0, 1.0), [(0.6, 2.0); 2], (3, 3), &opts, 10_000)?;
            let anchor = "fraction trace form is concave on D₂";
            Ok(CheckResult::new(
                "fraction_trace_inside",
                anchor,
                !r.inside.verdict.is_violation() && r.outside.verdict.is_violation(),
                r.inside.worst_margin,
            )
            .with_witness(json!({ "inside": summary(&r.inside), "outside": summary(&r.outside) })))
        },
    ));
    for k in 1..=2 {
        let id = format!("reciprocal_convex_k{k}");
        let anchor = "1/(t₁⋯t_k) and its powers in [0, 1] are operator convex";
        out.push(check(&id, anchor, || {
            let r = reciprocal_convexity(k, 2, &RunOptions::new(200, seed), 1)?;
            let ok = r.product.verdict == Verdict::ConvexConsistent
                && r.powers
                    .iter()
                    .all(|c| c.report.verdict == Verdict::ConvexConsistent);
            Ok(CheckResult::new(&id, anchor, ok, r.product.worst_margin)
                .with_witness(summary(&r.product)))
        }));
    }
    out.push(check(
        "quadratic_form_inverse",
        "(A, ξ) ↦ (A⁻¹ξ|ξ) is jointly convex",
        || {
            let f = FunctionSpec::resolvent_sum(0.0, vec![0.0], vec![1.0])?;
            let r = quadratic_form_convexity(f, 3, &opts)?;
            Ok(consistent(
                "quadratic_form_inverse",
                "(A, ξ) ↦ (A⁻¹ξ|ξ) is jointly convex",
                &r,
            ))
        },
    ));
    out.push(check(
        "quadratic_form_resolvent",
        "(A, ξ) ↦ (f(A)ξ|ξ) is jointly convex for resolvent sums",
        || {
            let f = certify::random_resolvent_sum(&mut trial_rng(seed, 8), 3)?;
            let r = quadratic_form_convexity(f, 3, &opts)?;
            Ok(consistent(
                "quadratic_form_resolvent",
                "(A, ξ) ↦ (f(A)ξ|ξ) is jointly convex for resolvent sums",
                &r,
            ))
        },
    ));
    for slot in [Slot::A, Slot::B, Slot::K] {
        let id = format!("two_of_three_fixed_{slot:?}");
        let anchor = "tr[(A+u)⁻¹ K* (B+v)⁻¹ K] is convex in any two of A, B, K";
        out.push(check(&id, anchor, || {
            Ok(consistent(
                &id,
                anchor,
                &two_of_three(Some(slot), 1.0, 1.0, (2, 2), &opts)?,
            ))
        }));
    }
    out.push(check(
        "two_of_three_all_free",
        "tr[(A+u)⁻¹ K* (B+v)⁻¹ K] is not jointly convex in A, B, K",
        || {
            let r = two_of_three(None, 1.0, 1.0, (2, 2), &search)?;
            Ok(violating(
                "two_of_three_all_free",
                "tr[(A+u)⁻¹ K* (B+v)⁻¹ K] is not jointly convex in A, B, K",
                &r,
            ))
        },
    ));
    out.push(check(
        "lieb_integral",
        "∫₀^∞ tr[(A+u)⁻¹ K* (B+u)⁻¹ K] du is jointly convex",
        || {
            let q = certify::quadrature::default_quadrature();
            let r = lieb_integral_convexity((2, 2), q, None, &opts)?;
            Ok(consistent(
                "lieb_integral",
                "∫₀^∞ tr[(A+u)⁻¹ K* (B+u)⁻¹ K] du is jointly convex",
                &r,
            ))
        },
    ));
    for (p, q, dims) in [(0.5, 0.5, (2, 2)), (0.7, 0.7, (1, 1))] {
        let id = format!("bridge_{p}_{q}");
        let anchor = "trace form convexity ⇔ matrix convexity of f, with equal margins";
        out.push(check(&id, anchor, || {
            let r = theorem1_bridge(&pow(p, q)?, dims, Direction::Concave, 200, seed)?;
            let expect_violation = p + q > 1.0;
            let ok = r.verdict.is_violation() == expect_violation && r.max_transfer_error <= 1e-10;
            Ok(CheckResult::new(
                &id,
                anchor,
                ok,
                r.tensor.worst_margin.min(r.trace.worst_margin),
            )
            .with_witness(serde_json::to_value(&r)?))
        }));
    }
    out.push(check(
        "scale_covariance",
        "margins of t^p s^q scale by c^{p+q}",
        || {
            let err = scale_covariance(0.5, 0.5, (3, 3), &RunOptions::new(50, seed), 2.0)?;
            Ok(identity(
                "scale_covariance",
                "margins of t^p s^q scale by c^{p+q}",
                err,
                1e-8,
            ))
        },
    ));
    out
}
