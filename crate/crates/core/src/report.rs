//! Named residual checks collected into a serialisable report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    /// Free-form note: first counterexample, observed braid sense, skipped samples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(check: &str, family: &str, max_residual: f64, tolerance: f64) -> Self {
        let verdict = if max_residual < tolerance { Verdict::Pass } else { Verdict::Fail };
        Check {
            check: check.to_string(),
            family: family.to_string(),
            params: BTreeMap::new(),
            samples: 0,
            seed: None,
            max_residual,
            tolerance,
            verdict,
            detail: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn samples(mut self, n: usize) -> Self {
        self.samples = n;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn max_residual(&self, name: &str) -> f64 {
        self.checks.iter().filter(|c| c.check == name).map(|c| c.max_residual).fold(0.0, f64::max)
    }

    /// Stable ordering by check name so merged reports serialise identically.
    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.check.cmp(&b.check));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}
