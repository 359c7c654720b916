//! Geometric and harmonic matrix means and their block-matrix characterizations.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::funcalc::{func_calc_tensor, FunctionSpec};
use crate::linalg::random::{hermitian, trial_rng};
use crate::linalg::{
    apply_scalar_function, block_2x2, inverse, min_eigenvalue, sqrt_psd, Hermitian,
};
use crate::scalar::Scalar;

fn require_pd<T: Scalar>(m: &Hermitian<T>, tol: &Tolerances<T>) -> Result<()> {
    let min = min_eigenvalue(m)?;
    if min > tol.psd {
        Ok(())
    } else {
        Err(Error::NotPositiveDefinite {
            min_eigenvalue: min.to_f64_lossy(),
        })
    }
}

fn sandwich<T: Scalar>(outer: &Hermitian<T>, inner: &Hermitian<T>) -> Result<Hermitian<T>> {
    Hermitian::from_matrix(&(outer.matrix() * inner.matrix()) * outer.matrix())
}

/// `A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}`, with every root taken spectrally.
pub fn geometric_mean<T: Scalar>(a: &Hermitian<T>, b: &Hermitian<T>) -> Result<Hermitian<T>> {
    geometric_mean_with(a, b, &Tolerances::default())
}

pub fn geometric_mean_with<T: Scalar>(
    a: &Hermitian<T>,
    b: &Hermitian<T>,
    tol: &Tolerances<T>,
) -> Result<Hermitian<T>> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!(
            "mean of {}x{} and {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    require_pd(a, tol)?;
    require_pd(b, tol)?;
    let a_half = apply_scalar_function(a, |x| x.sqrt())?;
    let a_neg_half = apply_scalar_function(a, |x| T::one() / x.sqrt())?;
    let inner = sqrt_psd(&sandwich(&a_neg_half, b)?)?;
    sandwich(&a_half, &inner)
}

/// `2 (A^{-1} + B^{-1})^{-1}`.
pub fn harmonic_mean<T: Scalar>(a: &Hermitian<T>, b: &Hermitian<T>) -> Result<Hermitian<T>> {
    let tol = Tolerances::default();
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!(
            "mean of {}x{} and {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    require_pd(a, &tol)?;
    require_pd(b, &tol)?;
    Ok(inverse(&inverse(a)?.add(&inverse(b)?)?)?.scale(T::lit(2.0)))
}

/// Minimum eigenvalues of the two block inequalities characterizing the harmonic mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HarmonicMargins<T> {
    /// `2 diag(A, B) − [[C, C], [C, C]]` with `C` the harmonic mean.
    pub mean_block: T,
    /// `diag(A⁻¹, B⁻¹) − [[S, S], [S, S]]` with `S = (A + B)⁻¹`.
    pub inverse_block: T,
}

impl<T: Scalar> HarmonicMargins<T> {
    pub fn min(&self) -> T {
        self.mean_block.min(self.inverse_block)
    }
}

fn ones_block<T: Scalar>(c: &Hermitian<T>) -> Result<Hermitian<T>> {
    block_2x2(c.matrix(), c.matrix(), c.matrix())
}

pub fn harmonic_block_check<T: Scalar>(
    a: &Hermitian<T>,
    b: &Hermitian<T>,
) -> Result<HarmonicMargins<T>> {
    let c = harmonic_mean(a, b)?;
    let mean_block = a.direct_sum(b).scale(T::lit(2.0)).sub(&ones_block(&c)?)?;
    let s = inverse(&a.add(b)?)?;
    let inverse_block = inverse(a)?.direct_sum(&inverse(b)?).sub(&ones_block(&s)?)?;
    Ok(HarmonicMargins {
        mean_block: min_eigenvalue(&mean_block)?,
        inverse_block: min_eigenvalue(&inverse_block)?,
    })
}

/// Minimum eigenvalue of `[[A, C], [C, B]]`; nonnegative iff `C` is admissible.
pub fn block_margin<T: Scalar>(a: &Hermitian<T>, c: &Hermitian<T>, b: &Hermitian<T>) -> Result<T> {
    min_eigenvalue(&block_2x2(a.matrix(), c.matrix(), b.matrix())?)
}

/// `λ_min(A₂#B₂ − A₁#B₁)`; nonnegative when `A₁ ⪯ A₂` and `B₁ ⪯ B₂`.
pub fn gm_monotonicity_margin<T: Scalar>(
    a1: &Hermitian<T>,
    b1: &Hermitian<T>,
    a2: &Hermitian<T>,
    b2: &Hermitian<T>,
) -> Result<T> {
    min_eigenvalue(&geometric_mean(a2, b2)?.sub(&geometric_mean(a1, b1)?)?)
}

/// `λ_min(mid(A) # mid(B) − ½(A₁#B₁ + A₂#B₂))`.
pub fn gm_concavity_margin<T: Scalar>(
    a1: &Hermitian<T>,
    b1: &Hermitian<T>,
    a2: &Hermitian<T>,
    b2: &Hermitian<T>,
) -> Result<T> {
    let mid = geometric_mean(&a1.midpoint(a2)?, &b1.midpoint(b2)?)?;
    let avg = geometric_mean(a1, b1)?.midpoint(&geometric_mean(a2, b2)?)?;
    min_eigenvalue(&mid.sub(&avg)?)
}

/// Outcome of comparing one candidate `C` against `A # B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CandidateOutcome<T> {
    pub block_margin: T,
    /// `λ_min(A#B − C)`, only evaluated for admissible candidates.
    pub margin: Option<T>,
}

pub fn gm_candidate<T: Scalar>(
    a: &Hermitian<T>,
    b: &Hermitian<T>,
    g: &Hermitian<T>,
    c: &Hermitian<T>,
    admissible_tol: T,
) -> Result<CandidateOutcome<T>> {
    let block_margin = block_margin(a, c, b)?;
    let margin = if block_margin >= -admissible_tol {
        Some(min_eigenvalue(&g.sub(c)?)?)
    } else {
        None
    };
    Ok(CandidateOutcome {
        block_margin,
        margin,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeConfig {
    /// Perturbation size relative to `‖A#B‖_F`.
    pub delta: f64,
    pub seed: u64,
    /// Samples drawn, admissible or not.
    pub trials: usize,
    /// When set, keep drawing past `trials` until this many samples were admissible
    /// (bounded by `max_trials`).
    pub min_admissible: Option<usize>,
    pub max_trials: usize,
    pub admissible_tol: f64,
    pub violation_tol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            delta: 0.05,
            seed: 0,
            trials: 1000,
            min_admissible: None,
            max_trials: 10_000_000,
            admissible_tol: 1e-10,
            violation_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub tested: usize,
    pub admissible: usize,
    pub violations: usize,
    /// Smallest `λ_min(A#B − C)` over admissible samples.
    pub worst_margin: Option<f64>,
    pub witness_trial: Option<usize>,
    pub seed: u64,
    pub delta: f64,
}

/// Samples `C = A#B + δ‖A#B‖_F H` with `H` a unit-norm Gaussian Hermitian matrix drawn
/// from the stream of its trial index, keeps the candidates with `[[A, C], [C, B]]`
/// PSD and checks `C ⪯ A#B` for each.
pub fn gm_maximality_probe(
    a: &Hermitian<f64>,
    b: &Hermitian<f64>,
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if !(cfg.delta >= 0.0 && cfg.delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta = {}", cfg.delta)));
    }
    let g = geometric_mean(a, b)?;
    let scale = cfg.delta * g.frobenius_norm();
    let n = a.dim();
    let sample = |trial: usize| -> Result<Option<f64>> {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let h: Hermitian<f64> = hermitian(&mut rng, n, true);
        let h = h.scale(1.0 / h.frobenius_norm());
        let c = g.add(&h.scale(scale))?;
        Ok(gm_candidate(a, b, &g, &c, cfg.admissible_tol)?.margin)
    };

    let mut outcomes: Vec<Option<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(sample)
        .collect::<Result<_>>()?;
    if let Some(target) = cfg.min_admissible {
        const BATCH: usize = 4096;
        let mut admissible = outcomes.iter().flatten().count();
        while admissible < target && outcomes.len() < cfg.max_trials {
            let start = outcomes.len();
            let end = (start + BATCH).min(cfg.max_trials);
            let batch: Vec<Option<f64>> = (start..end)
                .into_par_iter()
                .map(sample)
                .collect::<Result<_>>()?;
            for o in batch {
                outcomes.push(o);
                admissible += o.is_some() as usize;
                if admissible == target {
                    break;
                }
            }
        }
    }

    let mut report = ProbeReport {
        tested: outcomes.len(),
        admissible: 0,
        violations: 0,
        worst_margin: None,
        witness_trial: None,
        seed: cfg.seed,
        delta: cfg.delta,
    };
    for (trial, margin) in outcomes.into_iter().enumerate() {
        let Some(m) = margin else { continue };
        report.admissible += 1;
        report.violations += (m < -cfg.violation_tol) as usize;
        if report.worst_margin.is_none_or(|w| m < w) {
            report.worst_margin = Some(m);
            report.witness_trial = Some(trial);
        }
    }
    Ok(report)
}

/// `F(X) = f(X) # g(X)` for tuples `X`, evaluated through the tensor calculus.
pub fn product_mean<T: Scalar>(
    f: &FunctionSpec<T>,
    g: &FunctionSpec<T>,
    xs: &[Hermitian<T>],
) -> Result<Hermitian<T>> {
    geometric_mean(&func_calc_tensor(f, xs)?, &func_calc_tensor(g, xs)?)
}

/// `λ_min(F(mid(X, Y)) − ½(F(X) + F(Y)))`; nonnegative when `F` is concave.
pub fn product_mean_check<T: Scalar>(
    f: &FunctionSpec<T>,
    g: &FunctionSpec<T>,
    xs: &[Hermitian<T>],
    ys: &[Hermitian<T>],
) -> Result<T> {
    if xs.len() != ys.len() {
        return Err(Error::Shape(format!(
            "tuples of length {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let mid: Vec<Hermitian<T>> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| x.midpoint(y))
        .collect::<Result<_>>()?;
    let avg = product_mean(f, g, xs)?.midpoint(&product_mean(f, g, ys)?)?;
    min_eigenvalue(&product_mean(f, g, &mid)?.sub(&avg)?)
}
