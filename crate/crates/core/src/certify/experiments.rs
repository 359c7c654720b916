//! The concrete convexity claims, each as a certification run.

use rand::Rng;
use serde::Serialize;

use super::map::{evaluate_instance, Direction, MapSpec, Slot};
use super::report::{certify, replay, trial_stream, ConvexityReport, RunOptions};
use crate::error::{Error, Result};
use crate::funcalc::FunctionSpec;
use crate::linalg::random::trial_rng;
use crate::linalg::Matrix;

/// Eigenvalue window used when a run does not specify one.
pub const DEFAULT_WINDOW: (f64, f64) = (0.1, 3.0);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepCell {
    pub p: f64,
    pub q: f64,
    pub report: ConvexityReport,
}

/// Concavity of `(A, B) ↦ tr A^p K* B^q K` over a grid of exponents, scalar-seeded so
/// that cells outside the concave range terminate at their first violation.
pub fn lieb_sweep(
    ps: &[f64],
    qs: &[f64],
    dims: (usize, usize),
    opts: &RunOptions,
) -> Result<Vec<SweepCell>> {
    let mut cells = Vec::with_capacity(ps.len() * qs.len());
    for &p in ps {
        for &q in qs {
            let f = FunctionSpec::exponent_product(vec![p, q])?;
            let spec = MapSpec::trace(f, Direction::Concave, dims, DEFAULT_WINDOW);
            cells.push(SweepCell {
                p,
                q,
                report: certify(&spec, opts)?,
            });
        }
    }
    Ok(cells)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FractionTraceReport {
    /// Concavity on the window inside `D_2`.
    pub inside: ConvexityReport,
    /// Scalar search with `t_1 t_2 < μ_1 μ_2 / 8`; expected to find a violation.
    pub outside: ConvexityReport,
}

/// Concavity of `(A, B) ↦ tr[A(A+μ_1)⁻¹ K* B(B+μ_2)⁻¹ K]` on a window inside `D_2`, plus
/// the scalar search outside the domain.
pub fn fraction_trace_concavity(
    mu: (f64, f64),
    windows: [(f64, f64); 2],
    dims: (usize, usize),
    opts: &RunOptions,
    search_trials: usize,
) -> Result<FractionTraceReport> {
    let f = FunctionSpec::fraction_product(vec![mu.0, mu.1])?;
    let spec = MapSpec::trace(f.clone(), Direction::Concave, dims, windows[0])
        .with_windows(windows.to_vec());
    let inside = certify(&spec, opts)?;
    let outside_windows = vec![(1e-3, mu.0 / 8f64.sqrt()), (1e-3, mu.1 / 8f64.sqrt())];
    let mut outside_spec = MapSpec::trace(f, Direction::Concave, (1, 1), outside_windows[0])
        .with_windows(outside_windows);
    outside_spec.enforce_domain = false;
    let outside = certify(&outside_spec, &RunOptions::search(search_trials, opts.seed))?;
    Ok(FractionTraceReport { inside, outside })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerCell {
    pub p: Vec<f64>,
    pub report: ConvexityReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReciprocalReport {
    /// `1 / (t_1 ⋯ t_k)`.
    pub product: ConvexityReport,
    /// Reciprocal powers with exponents drawn uniformly from `[0, 1]^k`.
    pub powers: Vec<PowerCell>,
}

pub fn reciprocal_convexity(
    k: usize,
    dim: usize,
    opts: &RunOptions,
    power_samples: usize,
) -> Result<ReciprocalReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let run = |p: Vec<f64>| -> Result<ConvexityReport> {
        let spec = MapSpec::tensor(
            FunctionSpec::reciprocal_product(p)?,
            Direction::Convex,
            vec![dim; k],
            DEFAULT_WINDOW,
        );
        certify(&spec, opts)
    };
    let product = run(vec![1.0; k])?;
    let mut rng = trial_rng(opts.seed, u64::MAX);
    let mut powers = Vec::with_capacity(power_samples);
    for _ in 0..power_samples {
        let p: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        powers.push(PowerCell {
            report: run(p.clone())?,
            p,
        });
    }
    Ok(ReciprocalReport { product, powers })
}

/// Joint convexity of `(A, ξ) ↦ (f(A) ξ | ξ)`.
pub fn quadratic_form_convexity(
    f: FunctionSpec<f64>,
    n: usize,
    opts: &RunOptions,
) -> Result<ConvexityReport> {
    certify(&MapSpec::quadratic(f, n, DEFAULT_WINDOW), opts)
}

/// Random resolvent combination `β + Σ w_i / (t + s_i)` with `s_i ∈ [0, 2]`, `w_i ∈ (0, 2]`.
pub fn random_resolvent_sum<R: Rng + ?Sized>(
    rng: &mut R,
    terms: usize,
) -> Result<FunctionSpec<f64>> {
    let nodes = (0..terms).map(|_| 2.0 * rng.random::<f64>()).collect();
    let weights = (0..terms)
        .map(|_| 2.0 - 2.0 * rng.random::<f64>())
        .collect();
    FunctionSpec::resolvent_sum(rng.random::<f64>(), nodes, weights)
}

/// The two points of the `t²` counterexample: the projections `diag(0, 1)` and
/// `½[[1, −1], [−1, 1]]` (each shifted by `ε I`) with vectors `(1, 0)` and `(0, −1)`.
pub fn t2_instance(eps: f64) -> super::map::Instance {
    let a1 = Matrix::from_real_rows(&[&[eps, 0.0], &[0.0, 1.0 + eps]]);
    let a2 = Matrix::from_real_rows(&[&[0.5 + eps, -0.5], &[-0.5, 0.5 + eps]]);
    let col = |v: [f64; 2]| Matrix::from_real_rows(&[&[v[0]], &[v[1]]]);
    super::map::Instance {
        x: vec![a1, col([1.0, 0.0])],
        y: vec![a2, col([0.0, -1.0])],
    }
}

/// `½[(A_1² ξ_1|ξ_1) + (A_2² ξ_2|ξ_2)] − (M² η|η)` with `M`, `η` the midpoints.
pub fn t2_counterexample(eps: f64) -> Result<f64> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be nonnegative, got {eps}"
        )));
    }
    let inst = t2_instance(eps);
    let value = |a: &Matrix<f64>, xi: &Matrix<f64>| -> f64 {
        // (A² ξ | ξ) = ‖A ξ‖² for Hermitian A.
        (a * xi).frobenius_norm().powi(2)
    };
    let mid = inst.midpoint();
    Ok(
        0.5 * (value(&inst.x[0], &inst.x[1]) + value(&inst.y[0], &inst.y[1]))
            - value(&mid[0], &mid[1]),
    )
}

/// The custom `t ↦ t²` used to feed the counterexample through the generic certifier.
pub fn square_function() -> FunctionSpec<f64> {
    use crate::funcalc::CustomFunction;
    FunctionSpec::custom(
        CustomFunction::new("t^2", 1, |t: &[f64]| t[0] * t[0], |_| true)
            .with_gradient(|t, _| 2.0 * t[0])
            .with_hessian(|_, _, _| 2.0),
    )
    .expect("arity 1")
}

/// Joint convexity of the discretized Lieb integral in `(A, B, K)` (or in two of them).
pub fn lieb_integral_convexity(
    dims: (usize, usize),
    quadrature: Vec<(f64, f64)>,
    fixed: Option<Slot>,
    opts: &RunOptions,
) -> Result<ConvexityReport> {
    certify(
        &MapSpec::integral(quadrature, dims, DEFAULT_WINDOW).with_fixed(fixed),
        opts,
    )
}

/// Convexity of `(A, B, K) ↦ tr[(A+u)⁻¹ K* (B+v)⁻¹ K]` with one argument frozen, or
/// with none frozen (where the map is not jointly convex).
pub fn two_of_three(
    fixed: Option<Slot>,
    u: f64,
    v: f64,
    dims: (usize, usize),
    opts: &RunOptions,
) -> Result<ConvexityReport> {
    certify(
        &MapSpec::two_of_three(fixed, u, v, dims, DEFAULT_WINDOW),
        opts,
    )
}

/// Largest relative deviation from `m(cA, cB) = c^{p+q} m(A, B)` over the trace-form
/// trials of an exponent product, `K` unscaled.
pub fn scale_covariance(
    p: f64,
    q: f64,
    dims: (usize, usize),
    opts: &RunOptions,
    c: f64,
) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scale must be positive, got {c}"
        )));
    }
    let spec = MapSpec::trace(
        FunctionSpec::exponent_product(vec![p, q])?,
        Direction::Concave,
        dims,
        DEFAULT_WINDOW,
    );
    spec.validate()?;
    let factor = c.powf(p + q);
    let mut worst: f64 = 0.0;
    for i in 0..opts.trials {
        let (inst, out) = replay(&spec, opts.seed, trial_stream(0, i))?;
        let scaled = evaluate_instance(&spec, &inst.scaled(&[0, 1], c))?;
        let expected = factor * out.margin;
        worst = worst.max((scaled.margin - expected).abs() / expected.abs().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}
