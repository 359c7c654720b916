//! Two-way transfer between midpoint violations of the tensor calculus on
//! `H_1 ⊗ conj(H_2)` and of the trace form `tr f(A,B)(K*) K`.
//!
//! With `Δ` the midpoint gap of the tensor calculus and `φ` a unit tensor, the trace
//! gap at `K = (Φφ)*` equals `(Δφ | φ)`; conversely the trace gap at a unit `K` equals
//! `(Δφ | φ)` for `φ = Φ⁻¹(K*)`.

use rayon::prelude::*;
use serde::Serialize;

use super::experiments::DEFAULT_WINDOW;
use super::map::Direction;
use super::report::{trial_stream, Verdict};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::funcalc::{
    conjugate_space_calculus, phi_inverse, phi_map, trace_form, FunctionSpec, TensorVector,
};
use crate::linalg::random::{hermitian_with_spectrum, trial_rng, unit_matrix};
use crate::linalg::{eigh, Hermitian, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BridgeTrial {
    /// Smallest eigenvalue of the tensor gap.
    pub tensor_margin: f64,
    /// Trace gap at `K = (Φφ)*` for the corresponding eigenvector `φ`.
    pub tensor_transferred: f64,
    pub tensor_scale: f64,
    /// Trace gap at a random unit `K`.
    pub trace_margin: f64,
    /// `(Δφ | φ)` for `φ = Φ⁻¹(K*)`.
    pub trace_transferred: f64,
    pub trace_scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SideSummary {
    pub violations: usize,
    pub worst_margin: f64,
    pub witness_trial: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BridgeReport {
    pub verdict: Verdict,
    pub trials: usize,
    pub seed: u64,
    pub tensor: SideSummary,
    pub trace: SideSummary,
    /// Violations found on either side and carried to the other.
    pub transferred: usize,
    /// Largest `|margin − transferred margin|` over transferred violations.
    pub max_violation_transfer_error: f64,
    /// Same, over every trial.
    pub max_transfer_error: f64,
}

fn gap(direction: Direction, mid: f64, x: f64, y: f64) -> f64 {
    let d = mid - 0.5 * (x + y);
    match direction {
        Direction::Concave => d,
        Direction::Convex => -d,
    }
}

/// One trial on the stream `(seed, trial)`.
pub fn bridge_trial(
    f: &FunctionSpec<f64>,
    dims: (usize, usize),
    direction: Direction,
    seed: u64,
    trial: usize,
) -> Result<BridgeTrial> {
    let (n, m) = dims;
    let (lo, hi) = DEFAULT_WINDOW;
    let mut rng = trial_rng(seed, trial_stream(0, trial));
    let a1: Hermitian<f64> = hermitian_with_spectrum(&mut rng, n, lo, hi, true);
    let a2 = hermitian_with_spectrum(&mut rng, n, lo, hi, true);
    let b1 = hermitian_with_spectrum(&mut rng, m, lo, hi, true);
    let b2 = hermitian_with_spectrum(&mut rng, m, lo, hi, true);
    let k: Matrix<f64> = unit_matrix(&mut rng, m, n, true);
    let (am, bm) = (a1.midpoint(&a2)?, b1.midpoint(&b2)?);

    let g1 = conjugate_space_calculus(f, &a1, &b1)?;
    let g2 = conjugate_space_calculus(f, &a2, &b2)?;
    let gm = conjugate_space_calculus(f, &am, &bm)?;
    let avg = g1.midpoint(&g2)?;
    let delta = match direction {
        Direction::Concave => gm.sub(&avg)?,
        Direction::Convex => avg.sub(&gm)?,
    };
    let trace_gap = |k: &Matrix<f64>| -> Result<(f64, f64, f64)> {
        let x = trace_form(f, &a1, &b1, k)?;
        let y = trace_form(f, &a2, &b2, k)?;
        let mid = trace_form(f, &am, &bm, k)?;
        Ok((gap(direction, mid, x, y), x, y))
    };

    let eig = eigh(&delta, &Tolerances::default())?;
    let phi = TensorVector::new(vec![n, m], eig.vectors.col(0))?;
    let (tensor_transferred, _, _) = trace_gap(&phi_map(&phi)?.adjoint())?;

    let (trace_margin, tx, ty) = trace_gap(&k)?;
    let trace_transferred = phi_inverse(&k.adjoint()).expectation(&delta)?;

    Ok(BridgeTrial {
        tensor_margin: eig.values[0],
        tensor_transferred,
        tensor_scale: 1.0 + g1.frobenius_norm() + g2.frobenius_norm(),
        trace_margin,
        trace_transferred,
        trace_scale: 1.0 + tx.abs() + ty.abs(),
    })
}

pub fn theorem1_bridge(
    f: &FunctionSpec<f64>,
    dims: (usize, usize),
    direction: Direction,
    trials: usize,
    seed: u64,
) -> Result<BridgeReport> {
    if f.arity() != 2 {
        return Err(Error::Config(
            "the bridge needs a two-variable function".into(),
        ));
    }
    if dims.0 == 0 || dims.1 == 0 {
        return Err(Error::Config("dims must be positive".into()));
    }
    let records: Vec<BridgeTrial> = (0..trials)
        .into_par_iter()
        .map(|i| bridge_trial(f, dims, direction, seed, i))
        .collect::<Result<_>>()?;
    const TOL: f64 = 1e-9;

    let summarize = |margin: &dyn Fn(&BridgeTrial) -> f64, scale: &dyn Fn(&BridgeTrial) -> f64| {
        let mut s = SideSummary {
            violations: 0,
            worst_margin: f64::INFINITY,
            witness_trial: None,
        };
        for (i, r) in records.iter().enumerate() {
            let m = margin(r);
            s.violations += (m < -TOL * scale(r)) as usize;
            if m < s.worst_margin {
                s.worst_margin = m;
                s.witness_trial = Some(i);
            }
        }
        s
    };
    let tensor = summarize(&|r| r.tensor_margin, &|r| r.tensor_scale);
    let trace = summarize(&|r| r.trace_margin, &|r| r.trace_scale);

    let mut transferred = 0;
    let mut max_violation_transfer_error: f64 = 0.0;
    let mut max_transfer_error: f64 = 0.0;
    for r in &records {
        let e_tensor = (r.tensor_margin - r.tensor_transferred).abs();
        let e_trace = (r.trace_margin - r.trace_transferred).abs();
        max_transfer_error = max_transfer_error.max(e_tensor).max(e_trace);
        if r.tensor_margin < -TOL * r.tensor_scale {
            transferred += 1;
            max_violation_transfer_error = max_violation_transfer_error.max(e_tensor);
        }
        if r.trace_margin < -TOL * r.trace_scale {
            transferred += 1;
            max_violation_transfer_error = max_violation_transfer_error.max(e_trace);
        }
    }
    let verdict = if tensor.violations + trace.violations > 0 {
        Verdict::Violation
    } else {
        match direction {
            Direction::Concave => Verdict::ConcaveConsistent,
            Direction::Convex => Verdict::ConvexConsistent,
        }
    };
    Ok(BridgeReport {
        verdict,
        trials,
        seed,
        tensor,
        trace,
        transferred,
        max_violation_transfer_error,
        max_transfer_error,
    })
}
