//! Randomized midpoint certification of operator convexity and concavity claims.
//!
//! Every trial draws from its own RNG stream derived from `(seed, trial index)`, so a
//! report depends only on the seed, the trial count and the map, never on scheduling.

mod bridge;
mod experiments;
mod map;
pub mod quadrature;
mod report;

pub use bridge::{bridge_trial, theorem1_bridge, BridgeReport, BridgeTrial, SideSummary};
pub use experiments::{
    fraction_trace_concavity, lieb_integral_convexity, lieb_sweep, quadratic_form_convexity,
    random_resolvent_sum, reciprocal_convexity, scale_covariance, square_function,
    t2_counterexample, t2_instance, two_of_three, FractionTraceReport, PowerCell, ReciprocalReport,
    SweepCell, DEFAULT_WINDOW,
};
pub use map::{
    evaluate_instance, evaluate_map, midpoint_trial, resolvent_trace, sample_instance, Direction,
    Instance, MapSpec, Slot, Target, TrialOutcome,
};
pub use report::{
    certify, config_json, replay, trial_stream, ConvexityReport, RunOptions, Verdict, Witness,
};

#[cfg(test)]
mod tests;
