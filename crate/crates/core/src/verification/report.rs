use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Outcome of one check. `passed` is always `worst_case <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub passed: bool,
    pub worst_case: f64,
    pub tolerance: f64,
    /// Inputs at the worst case, as named values.
    pub witness: Vec<(String, f64)>,
    pub samples_used: u64,
    /// Seconds.
    pub wall_time: f64,
    /// Informational reports document a known discrepancy and never fail a
    /// suite.
    #[serde(default)]
    pub informational: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl CheckReport {
    pub(crate) fn new(
        name: impl Into<String>,
        worst_case: f64,
        tolerance: f64,
        witness: Vec<(String, f64)>,
        samples_used: u64,
        started: Instant,
    ) -> Self {
        Self {
            check_name: name.into(),
            passed: worst_case <= tolerance,
            worst_case,
            tolerance,
            witness,
            samples_used,
            wall_time: started.elapsed().as_secs_f64(),
            informational: false,
            note: String::new(),
        }
    }

    pub(crate) fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Whether this report should fail a suite.
    pub fn is_failure(&self) -> bool {
        !self.passed && !self.informational
    }
}

pub(crate) fn witness(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Tracks the largest value seen and where it occurred.
pub(crate) struct Worst {
    pub value: f64,
    pub at: Vec<(String, f64)>,
}

impl Worst {
    pub fn new() -> Self {
        Self { value: f64::NEG_INFINITY, at: Vec::new() }
    }

    pub fn offer(&mut self, value: f64, at: &[(&str, f64)]) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = witness(at);
        }
    }
}

/// Fixed-width table for terminals.
pub fn summary_table(reports: &[CheckReport]) -> String {
    let width = reports.iter().map(|r| r.check_name.len()).max().unwrap_or(5).max(5);
    let mut out = format!(
        "{:<width$}  {:<6}  {:>12}  {:>10}  {:>9}  {:>8}\n",
        "check", "status", "worst", "tolerance", "samples", "secs"
    );
    for r in reports {
        let status = match (r.passed, r.informational) {
            (true, _) => "pass",
            (false, true) => "info",
            (false, false) => "FAIL",
        };
        out.push_str(&format!(
            "{:<width$}  {:<6}  {:>12.4e}  {:>10.1e}  {:>9}  {:>8.2}\n",
            r.check_name, status, r.worst_case, r.tolerance, r.samples_used, r.wall_time
        ));
    }
    out
}
