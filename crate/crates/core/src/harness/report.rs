//! Structured outcomes of law suites.
//!
//! A report is a flat list of cases, one per checked law instance, with the
//! stream seed that produced it and, on failure, a witness point and
//! residual. Reports are deterministic given their configuration and
//! serialize to a stable JSON document.

use crate::smooth::Verdict;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckCase {
    pub axiom: String,
    pub trial: u32,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub seed: u64,
}

impl CheckCase {
    pub fn from_verdict(axiom: &str, trial: u32, seed: u64, v: &Verdict) -> CheckCase {
        CheckCase {
            axiom: axiom.to_string(),
            trial,
            ok: v.equal,
            witness: v.witness.clone(),
            residual: Some(v.residual),
            seed,
        }
    }

    pub fn pass(axiom: &str, trial: u32, seed: u64) -> CheckCase {
        CheckCase {
            axiom: axiom.to_string(),
            trial,
            ok: true,
            witness: None,
            residual: None,
            seed,
        }
    }

    pub fn fail(axiom: &str, trial: u32, seed: u64) -> CheckCase {
        CheckCase {
            axiom: axiom.to_string(),
            trial,
            ok: false,
            witness: None,
            residual: None,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub passed: bool,
    pub cases: Vec<CheckCase>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>, cases: Vec<CheckCase>) -> CheckReport {
        let passed = cases.iter().all(|c| c.ok);
        CheckReport {
            suite: suite.into(),
            passed,
            cases,
        }
    }

    /// Concatenates sub-reports, prefixing each case id with its suite name.
    pub fn merged(suite: impl Into<String>, parts: Vec<CheckReport>) -> CheckReport {
        let mut cases = Vec::new();
        for part in parts {
            for mut case in part.cases {
                case.axiom = format!("{}/{}", part.suite, case.axiom);
                cases.push(case);
            }
        }
        CheckReport::new(suite, cases)
    }

    /// Distinct axiom ids with at least one failing case, in first-failure order.
    pub fn failing_axioms(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in &self.cases {
            if !c.ok && !out.contains(&c.axiom) {
                out.push(c.axiom.clone());
            }
        }
        out
    }

    /// First failing case, if any.
    pub fn first_failure(&self) -> Option<&CheckCase> {
        self.cases.iter().find(|c| !c.ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_schema_fields() {
        let report = CheckReport::new(
            "demo",
            vec![
                CheckCase::pass("law", 0, 42),
                CheckCase {
                    axiom: "law".into(),
                    trial: 1,
                    ok: false,
                    witness: Some(vec![0.5, -1.0]),
                    residual: Some(0.25),
                    seed: 43,
                },
            ],
        );
        assert!(!report.passed);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["suite"], "demo");
        assert_eq!(json["passed"], false);
        assert_eq!(json["cases"][1]["ok"], false);
        assert_eq!(json["cases"][1]["witness"][1], -1.0);
        assert_eq!(json["cases"][1]["residual"], 0.25);
        assert_eq!(json["cases"][0]["seed"], 42);
        // omitted optionals stay absent rather than null
        assert!(json["cases"][0].get("witness").is_none());
        // round trip
        let back: CheckReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn merged_prefixes_case_ids() {
        let a = CheckReport::new("alpha", vec![CheckCase::pass("x", 0, 1)]);
        let b = CheckReport::new("beta", vec![CheckCase::fail("y", 0, 2)]);
        let m = CheckReport::merged("all", vec![a, b]);
        assert_eq!(m.cases[0].axiom, "alpha/x");
        assert_eq!(m.failing_axioms(), vec!["beta/y".to_string()]);
    }
}
