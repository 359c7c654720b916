//! Certification runs: many independent midpoint trials aggregated into a report.

use rayon::prelude::*;
use serde::Serialize;

use super::map::{midpoint_trial, Direction, Instance, MapSpec, TrialOutcome};
use crate::error::Result;
use crate::funcalc::FunctionSpecJson;
use crate::linalg::random::trial_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "CONCAVE-consistent")]
    ConcaveConsistent,
    #[serde(rename = "CONVEX-consistent")]
    ConvexConsistent,
    #[serde(rename = "VIOLATION")]
    Violation,
}

impl Verdict {
    pub fn is_violation(self) -> bool {
        self == Verdict::Violation
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::ConcaveConsistent => "CONCAVE-consistent",
            Verdict::ConvexConsistent => "CONVEX-consistent",
            Verdict::Violation => "VIOLATION",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub dims: Vec<usize>,
    pub margin: f64,
    pub relative_margin: f64,
    /// The two sampled points in matrix JSON format.
    pub inputs: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub verdict: Verdict,
    pub trials: usize,
    pub violations: usize,
    /// Smallest margin over all trials; the witness attains it.
    pub worst_margin: f64,
    /// Smallest margin relative to `1 + ‖F(X)‖ + ‖F(Y)‖`.
    pub worst_relative_margin: f64,
    pub witness: Option<Witness>,
    pub seed: u64,
    pub violation_tol: f64,
    pub config: serde_json::Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunOptions {
    pub trials: usize,
    pub seed: u64,
    /// Run `trials` scalar (all dims 1) trials before the requested dims.
    pub scalar_seeding: bool,
    /// Stop after the first violating trial (in trial order).
    pub stop_at_violation: bool,
    /// Relative tolerance: a trial violates when `margin < −tol · (1 + ‖F(X)‖ + ‖F(Y)‖)`.
    pub violation_tol: f64,
}

impl RunOptions {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            scalar_seeding: false,
            stop_at_violation: false,
            violation_tol: 1e-9,
        }
    }

    /// Scalar-seeded search that stops at the first violation.
    pub fn search(trials: usize, seed: u64) -> Self {
        Self {
            scalar_seeding: true,
            stop_at_violation: true,
            ..Self::new(trials, seed)
        }
    }
}

/// RNG stream of trial `i` in ladder stage `stage`.
pub fn trial_stream(stage: usize, i: usize) -> u64 {
    ((stage as u64) << 32) | i as u64
}

struct Record {
    stage: usize,
    index: usize,
    outcome: TrialOutcome,
}

pub fn config_json(spec: &MapSpec) -> serde_json::Value {
    let function = spec
        .f
        .as_ref()
        .map(|f| match FunctionSpecJson::try_from(f) {
            Ok(j) => serde_json::to_value(j).expect("plain data"),
            Err(_) => serde_json::Value::String(format!("{:?}", f.kind())),
        });
    serde_json::json!({
        "target": spec.target,
        "direction": spec.direction,
        "function": function,
        "dims": spec.dims,
        "windows": spec.windows,
        "fixed": spec.fixed,
        "quadrature_nodes": spec.quadrature.len(),
        "shifts": spec.shifts,
    })
}

/// Re-draws the instance of one trial from its stream.
pub fn replay(spec: &MapSpec, seed: u64, stream: u64) -> Result<(Instance, TrialOutcome)> {
    midpoint_trial(spec, &mut trial_rng(seed, stream))
}

/// Runs the trials of `opts` (in parallel, with results independent of scheduling).
pub fn certify(spec: &MapSpec, opts: &RunOptions) -> Result<ConvexityReport> {
    spec.validate()?;
    let mut stages = Vec::new();
    if opts.scalar_seeding && spec.dims.iter().any(|&d| d != 1) {
        stages.push(spec.clone().with_dims(vec![1; spec.dims.len()]));
    }
    stages.push(spec.clone());

    let violates = |o: &TrialOutcome| o.margin < -opts.violation_tol * o.scale;
    let batch = if opts.stop_at_violation {
        1024
    } else {
        usize::MAX
    };
    let mut records: Vec<Record> = Vec::new();
    'stages: for (stage, s) in stages.iter().enumerate() {
        let mut start = 0;
        while start < opts.trials {
            let end = start.saturating_add(batch).min(opts.trials);
            let outcomes: Vec<TrialOutcome> = (start..end)
                .into_par_iter()
                .map(|i| replay(s, opts.seed, trial_stream(stage, i)).map(|(_, o)| o))
                .collect::<Result<_>>()?;
            for (offset, outcome) in outcomes.into_iter().enumerate() {
                let hit = violates(&outcome);
                records.push(Record {
                    stage,
                    index: start + offset,
                    outcome,
                });
                if hit && opts.stop_at_violation {
                    break 'stages;
                }
            }
            start = end;
        }
    }

    let violations = records.iter().filter(|r| violates(&r.outcome)).count();
    let mut worst: Option<&Record> = None;
    for r in &records {
        if worst.is_none_or(|w| r.outcome.margin < w.outcome.margin) {
            worst = Some(r);
        }
    }
    let worst_relative_margin = records
        .iter()
        .map(|r| r.outcome.relative())
        .fold(f64::INFINITY, f64::min);
    let witness = match worst {
        Some(r) => {
            let s = &stages[r.stage];
            let (inst, _) = replay(s, opts.seed, trial_stream(r.stage, r.index))?;
            Some(Witness {
                trial: records
                    .iter()
                    .position(|x| std::ptr::eq(x, r))
                    .expect("member"),
                dims: s.dims.clone(),
                margin: r.outcome.margin,
                relative_margin: r.outcome.relative(),
                inputs: inst.to_json(s),
            })
        }
        None => None,
    };
    let verdict = if violations > 0 {
        Verdict::Violation
    } else {
        match spec.direction {
            Direction::Convex => Verdict::ConvexConsistent,
            Direction::Concave => Verdict::ConcaveConsistent,
        }
    };
    Ok(ConvexityReport {
        verdict,
        trials: records.len(),
        violations,
        worst_margin: worst.map_or(0.0, |r| r.outcome.margin),
        worst_relative_margin: if records.is_empty() {
            0.0
        } else {
            worst_relative_margin
        },
        witness,
        seed: opts.seed,
        violation_tol: opts.violation_tol,
        config: config_json(spec),
    })
}
