//! Consolidated JSON report of suite runs.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckVerdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// Short statement of the result being checked.
    pub anchor: String,
    pub verdict: CheckVerdict,
    /// The checked quantity: an extreme eigenvalue or gap for inequalities, minus the
    /// discrepancy for identities, the value itself for reproduced numbers.
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl CheckResult {
    pub fn new(id: &str, anchor: &str, pass: bool, margin: f64) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            verdict: if pass {
                CheckVerdict::Pass
            } else {
                CheckVerdict::Fail
            },
            margin,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: serde_json::Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == CheckVerdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tool_version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn new(seed: u64, suites: Vec<SuiteResult>) -> Self {
        Self {
            tool_version: Some(env!("CARGO_PKG_VERSION").into()),
            seed: Some(seed),
            suites,
        }
    }

    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

pub fn emit_report(report: &Report) -> serde_json::Value {
    serde_json::to_value(report).expect("report is plain data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report() {
        assert_eq!(
            emit_report(&Report::default()),
            serde_json::json!({ "suites": [] })
        );
    }

    #[test]
    fn check_serialization() {
        let c = CheckResult::new("t2_counterexample", "x", true, -0.0625);
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["id"], "t2_counterexample");
        assert_eq!(v["margin"], -0.0625);
        assert_eq!(v["verdict"], "PASS");
        assert!(v.get("witness").is_none());
    }
}
