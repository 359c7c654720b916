//! Operator maps under test and the single midpoint trial.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{domain_contains, DomainSpec};
use crate::error::{Error, Result};
use crate::funcalc::{func_calc_tensor, trace_form, FunctionSpec};
use crate::json::matrix_to_value;
use crate::linalg::random::{complex_vector, hermitian_with_spectrum, uniform, unit_matrix};
use crate::linalg::{inverse, min_eigenvalue, Hermitian, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `X ↦ f(X_1, …, X_k)` as a Hermitian matrix.
    TensorCalculus,
    /// `(A, B) ↦ tr f(A,B)(K*) K` for a fixed `K`.
    TraceForm,
    /// `(A, ξ) ↦ (f(A) ξ | ξ)`.
    QuadraticForm,
    /// `(A, B, K) ↦ Σ_j w_j tr[(A + u_j)⁻¹ K* (B + u_j)⁻¹ K]`.
    IntegralForm,
    /// `(A, B, K) ↦ tr[(A + u)⁻¹ K* (B + v)⁻¹ K]`.
    TwoOfThree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Convex,
    Concave,
}

/// One of the three arguments of the integral and two-of-three maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    A,
    B,
    K,
}

impl Slot {
    fn index(self) -> usize {
        self as usize
    }
}

impl std::str::FromStr for Slot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Slot::A),
            "B" | "b" => Ok(Slot::B),
            "K" | "k" => Ok(Slot::K),
            _ => Err(Error::Parse(format!(
                "unknown slot `{s}` (expected A, B or K)"
            ))),
        }
    }
}

/// A map, the claimed convexity direction and the sampling ensemble.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub target: Target,
    pub direction: Direction,
    /// Required for the tensor, trace and quadratic targets.
    pub f: Option<FunctionSpec<f64>>,
    /// Matrix sizes of the Hermitian arguments: `(n_1, …, n_k)` for the tensor calculus,
    /// `(n, m)` = (dim A, dim B) for trace/integral/two-of-three, `(n)` for the quadratic form.
    pub dims: Vec<usize>,
    /// Eigenvalue window per Hermitian argument.
    pub windows: Vec<(f64, f64)>,
    /// Argument held equal in both sampled points.
    pub fixed: Option<Slot>,
    /// `(u_j, w_j)` for the integral form.
    pub quadrature: Vec<(f64, f64)>,
    /// `(u, v)` for the two-of-three map.
    pub shifts: (f64, f64),
    /// Reject windows that leave the concavity domain of a fraction product.
    pub enforce_domain: bool,
}

impl MapSpec {
    fn base(target: Target, direction: Direction, dims: Vec<usize>, window: (f64, f64)) -> Self {
        let windows = vec![window; dims.len()];
        Self {
            target,
            direction,
            f: None,
            dims,
            windows,
            fixed: None,
            quadrature: Vec::new(),
            shifts: (1.0, 1.0),
            enforce_domain: true,
        }
    }

    pub fn tensor(
        f: FunctionSpec<f64>,
        direction: Direction,
        dims: Vec<usize>,
        window: (f64, f64),
    ) -> Self {
        Self {
            f: Some(f),
            ..Self::base(Target::TensorCalculus, direction, dims, window)
        }
    }

    pub fn trace(
        f: FunctionSpec<f64>,
        direction: Direction,
        dims: (usize, usize),
        window: (f64, f64),
    ) -> Self {
        Self {
            f: Some(f),
            ..Self::base(Target::TraceForm, direction, vec![dims.0, dims.1], window)
        }
    }

    pub fn quadratic(f: FunctionSpec<f64>, n: usize, window: (f64, f64)) -> Self {
        Self {
            f: Some(f),
            ..Self::base(Target::QuadraticForm, Direction::Convex, vec![n], window)
        }
    }

    pub fn integral(quadrature: Vec<(f64, f64)>, dims: (usize, usize), window: (f64, f64)) -> Self {
        Self {
            quadrature,
            ..Self::base(
                Target::IntegralForm,
                Direction::Convex,
                vec![dims.0, dims.1],
                window,
            )
        }
    }

    pub fn two_of_three(
        fixed: Option<Slot>,
        u: f64,
        v: f64,
        dims: (usize, usize),
        window: (f64, f64),
    ) -> Self {
        Self {
            fixed,
            shifts: (u, v),
            ..Self::base(
                Target::TwoOfThree,
                Direction::Convex,
                vec![dims.0, dims.1],
                window,
            )
        }
    }

    pub fn with_windows(mut self, windows: Vec<(f64, f64)>) -> Self {
        self.windows = windows;
        self
    }

    pub fn with_fixed(mut self, fixed: Option<Slot>) -> Self {
        self.fixed = fixed;
        self
    }

    pub fn with_dims(mut self, dims: Vec<usize>) -> Self {
        self.dims = dims;
        self
    }

    fn function(&self) -> Result<&FunctionSpec<f64>> {
        self.f
            .as_ref()
            .ok_or_else(|| Error::Config(format!("target {:?} needs a function", self.target)))
    }

    /// Checks shapes, windows against the function's domain, and for fraction products
    /// the rectangle condition: the lower corner of the window box lies in `D_k`, so
    /// (the domain being upward closed) every spectral tuple sampled from the box does.
    pub fn validate(&self) -> Result<()> {
        let expected = match self.target {
            Target::TensorCalculus => self.function()?.arity(),
            Target::TraceForm => {
                if self.function()?.arity() != 2 {
                    return Err(Error::Config(
                        "trace form needs a two-variable function".into(),
                    ));
                }
                2
            }
            Target::QuadraticForm => {
                if self.function()?.arity() != 1 {
                    return Err(Error::Config(
                        "quadratic form needs a one-variable function".into(),
                    ));
                }
                1
            }
            Target::IntegralForm | Target::TwoOfThree => 2,
        };
        if self.dims.len() != expected || self.windows.len() != expected {
            return Err(Error::Config(format!(
                "{:?} expects {expected} dims and windows, got {} and {}",
                self.target,
                self.dims.len(),
                self.windows.len()
            )));
        }
        if self.dims.contains(&0) {
            return Err(Error::Config("dims must be positive".into()));
        }
        for &(lo, hi) in &self.windows {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(format!("bad window [{lo}, {hi}]")));
            }
        }
        match self.target {
            Target::IntegralForm => {
                if self.quadrature.is_empty()
                    || self.quadrature.iter().any(|&(u, w)| !(u >= 0.0 && w > 0.0))
                {
                    return Err(Error::Config(
                        "quadrature needs nodes u ≥ 0 and positive weights".into(),
                    ));
                }
                self.require_positive_windows()?;
            }
            Target::TwoOfThree => {
                if !(self.shifts.0 > 0.0 && self.shifts.1 > 0.0) {
                    return Err(Error::Config(format!(
                        "shifts must be positive, got {:?}",
                        self.shifts
                    )));
                }
                self.require_positive_windows()?;
            }
            _ => {}
        }
        if matches!(
            self.target,
            Target::TensorCalculus | Target::TraceForm | Target::QuadraticForm
        ) {
            let f = self.function()?;
            let corners = [
                self.windows.iter().map(|w| w.0).collect::<Vec<_>>(),
                self.windows.iter().map(|w| w.1).collect::<Vec<_>>(),
            ];
            if corners.iter().any(|c| !f.in_domain(c)) {
                return Err(Error::Config(format!(
                    "windows {:?} leave the domain of {:?}",
                    self.windows,
                    f.kind()
                )));
            }
            if let (FunctionSpec::FractionProduct { mu }, true) = (f, self.enforce_domain) {
                let lower = &corners[0];
                let m = domain_contains(&DomainSpec::new(mu.clone())?, lower)?;
                if !m.member {
                    return Err(Error::Config(format!(
                        "window lower corner {lower:?} is outside the concavity domain (margin {:.3e})",
                        m.margin
                    )));
                }
            }
        }
        Ok(())
    }

    fn require_positive_windows(&self) -> Result<()> {
        if self.windows.iter().any(|w| w.0 <= 0.0) {
            return Err(Error::Config("windows must be positive".into()));
        }
        Ok(())
    }

    /// Number of arguments of a sampled point.
    fn slots(&self) -> usize {
        match self.target {
            Target::TensorCalculus => self.dims.len(),
            Target::TraceForm | Target::IntegralForm | Target::TwoOfThree => 3,
            Target::QuadraticForm => 2,
        }
    }

    fn frozen(&self, slot: usize) -> bool {
        match self.target {
            Target::TraceForm => slot == 2,
            Target::IntegralForm | Target::TwoOfThree => {
                self.fixed.is_some_and(|s| s.index() == slot)
            }
            _ => false,
        }
    }

    fn slot_names(&self) -> Vec<String> {
        match self.target {
            Target::TensorCalculus => (1..=self.dims.len()).map(|i| format!("X{i}")).collect(),
            Target::QuadraticForm => vec!["A".into(), "xi".into()],
            _ => vec!["A".into(), "B".into(), "K".into()],
        }
    }
}

/// Frobenius-norm range of `K` for the integral and two-of-three maps, where `K` is one
/// of the convexity variables rather than a fixed probe.
pub const K_RADIUS: (f64, f64) = (0.25, 2.0);

/// Two sampled points `X`, `Y`; each argument is stored as a matrix (vectors as columns).
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub x: Vec<Matrix<f64>>,
    pub y: Vec<Matrix<f64>>,
}

impl Instance {
    pub fn midpoint(&self) -> Vec<Matrix<f64>> {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(a, b)| (a + b).scale(0.5))
            .collect()
    }

    /// Multiplies the given arguments of both points by `c`.
    pub fn scaled(&self, slots: &[usize], c: f64) -> Self {
        let scale = |p: &Vec<Matrix<f64>>| {
            p.iter()
                .enumerate()
                .map(|(i, m)| {
                    if slots.contains(&i) {
                        m.scale(c)
                    } else {
                        m.clone()
                    }
                })
                .collect()
        };
        Self {
            x: scale(&self.x),
            y: scale(&self.y),
        }
    }

    pub fn to_json(&self, spec: &MapSpec) -> serde_json::Value {
        let point = |p: &[Matrix<f64>]| {
            let map: serde_json::Map<String, serde_json::Value> = spec
                .slot_names()
                .into_iter()
                .zip(p)
                .map(|(name, m)| (name, matrix_to_value(m)))
                .collect();
            serde_json::Value::Object(map)
        };
        serde_json::json!({ "x": point(&self.x), "y": point(&self.y) })
    }
}

pub fn sample_instance<R: Rng + ?Sized>(spec: &MapSpec, rng: &mut R) -> Instance {
    let slots = spec.slots();
    let draw = |slot: usize, rng: &mut R| -> Matrix<f64> {
        match (spec.target, slot) {
            (Target::QuadraticForm, 1) => Matrix::column(complex_vector(rng, spec.dims[0])),
            (Target::TensorCalculus, i) | (_, i @ (0 | 1)) => {
                let (lo, hi) = spec.windows[i];
                hermitian_with_spectrum(rng, spec.dims[i], lo, hi, true).into_matrix()
            }
            (Target::TraceForm, _) => unit_matrix(rng, spec.dims[1], spec.dims[0], true),
            // K is a variable of these maps: its norm must vary too.
            _ => {
                let r = uniform(rng, K_RADIUS.0, K_RADIUS.1);
                unit_matrix(rng, spec.dims[1], spec.dims[0], true).scale(r)
            }
        }
    };
    let x: Vec<Matrix<f64>> = (0..slots).map(|s| draw(s, rng)).collect();
    let y = (0..slots)
        .map(|s| {
            if spec.frozen(s) {
                x[s].clone()
            } else {
                draw(s, rng)
            }
        })
        .collect();
    Instance { x, y }
}

fn herm(m: &Matrix<f64>) -> Result<Hermitian<f64>> {
    Hermitian::from_matrix(m.clone())
}

/// Value of the map at one point, as a Hermitian matrix (1×1 for scalar-valued maps).
pub fn evaluate_map(spec: &MapSpec, p: &[Matrix<f64>]) -> Result<Hermitian<f64>> {
    match spec.target {
        Target::TensorCalculus => {
            let xs: Vec<Hermitian<f64>> = p.iter().map(herm).collect::<Result<_>>()?;
            func_calc_tensor(spec.function()?, &xs)
        }
        Target::TraceForm => Ok(Hermitian::scalar(trace_form(
            spec.function()?,
            &herm(&p[0])?,
            &herm(&p[1])?,
            &p[2],
        )?)),
        Target::QuadraticForm => {
            let fa = func_calc_tensor(spec.function()?, &[herm(&p[0])?])?;
            Ok(Hermitian::scalar(fa.quadratic_form(p[1].as_slice())?))
        }
        Target::IntegralForm => {
            let mut total = 0.0;
            for &(u, w) in &spec.quadrature {
                total += w * resolvent_trace(&p[0], &p[1], &p[2], u, u)?;
            }
            Ok(Hermitian::scalar(total))
        }
        Target::TwoOfThree => Ok(Hermitian::scalar(resolvent_trace(
            &p[0],
            &p[1],
            &p[2],
            spec.shifts.0,
            spec.shifts.1,
        )?)),
    }
}

/// `tr[(A + u)⁻¹ K* (B + v)⁻¹ K]`.
pub fn resolvent_trace(
    a: &Matrix<f64>,
    b: &Matrix<f64>,
    k: &Matrix<f64>,
    u: f64,
    v: f64,
) -> Result<f64> {
    let ra = inverse(&herm(a)?.shift(u))?;
    let rb = inverse(&herm(b)?.shift(v))?;
    let left = ra.matrix() * &k.adjoint();
    Ok((&(&left * rb.matrix()) * k).trace().re)
}

/// Result of one midpoint comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    /// Extreme eigenvalue (or scalar gap) of the midpoint inequality, signed so that
    /// nonnegative means consistent with the claimed direction.
    pub margin: f64,
    /// `1 + ‖F(X)‖ + ‖F(Y)‖`, the scale of the relative violation tolerance.
    pub scale: f64,
}

impl TrialOutcome {
    pub fn relative(&self) -> f64 {
        self.margin / self.scale
    }
}

pub fn evaluate_instance(spec: &MapSpec, inst: &Instance) -> Result<TrialOutcome> {
    let fx = evaluate_map(spec, &inst.x)?;
    let fy = evaluate_map(spec, &inst.y)?;
    let mid = inst.midpoint();
    if spec.enforce_domain {
        check_fraction_domain(spec, &[&inst.x, &inst.y, &mid])?;
    }
    let fm = evaluate_map(spec, &mid)?;
    let avg = fx.midpoint(&fy)?;
    let gap = match spec.direction {
        Direction::Convex => avg.sub(&fm)?,
        Direction::Concave => fm.sub(&avg)?,
    };
    Ok(TrialOutcome {
        margin: min_eigenvalue(&gap)?,
        scale: 1.0 + fx.frobenius_norm() + fy.frobenius_norm(),
    })
}

/// Asserts that every spectral tuple of the sampled points lies in `D_k` when the map is
/// built from a fraction product: the tuple of smallest eigenvalues must be a member.
fn check_fraction_domain(spec: &MapSpec, points: &[&Vec<Matrix<f64>>]) -> Result<()> {
    let Some(FunctionSpec::FractionProduct { mu }) = &spec.f else {
        return Ok(());
    };
    if !matches!(spec.target, Target::TensorCalculus | Target::TraceForm) {
        return Ok(());
    }
    let d = DomainSpec::new(mu.clone())?;
    for p in points {
        let lows: Vec<f64> = (0..mu.len())
            .map(|i| min_eigenvalue(&herm(&p[i])?))
            .collect::<Result<_>>()?;
        let m = domain_contains(&d, &lows)?;
        if !m.member {
            return Err(Error::Config(format!(
                "sampled spectral tuple {lows:?} left the concavity domain"
            )));
        }
    }
    Ok(())
}

/// Samples an instance and evaluates it, resampling after domain failures.
pub fn midpoint_trial<R: Rng + ?Sized>(
    spec: &MapSpec,
    rng: &mut R,
) -> Result<(Instance, TrialOutcome)> {
    const RETRIES: usize = 100;
    let mut last = String::new();
    for _ in 0..RETRIES {
        let inst = sample_instance(spec, rng);
        match evaluate_instance(spec, &inst) {
            Ok(out) => return Ok((inst, out)),
            Err(
                e @ (Error::ScalarDomain { .. }
                | Error::SpectrumDomain { .. }
                | Error::NotPositiveDefinite { .. }),
            ) => {
                last = e.to_string();
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingExhausted {
        retries: RETRIES,
        reason: last,
    })
}
