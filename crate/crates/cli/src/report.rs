use std::collections::BTreeMap;
use std::fmt::Write as _;

use beablekit::algebra::OperatorAlgebra;
use beablekit::Tolerance;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::scenario::JsonMatrix;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub kind: String,
    pub name: String,
    pub sha256: String,
}

impl InputEcho {
    pub fn new(kind: &str, name: &str, content: &[u8]) -> Self {
        Self {
            kind: kind.into(),
            name: name.into(),
            sha256: hex::encode(Sha256::digest(content)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceEcho {
    pub rank_tol: f64,
    pub residual_tol: f64,
}

impl From<Tolerance> for ToleranceEcho {
    fn from(t: Tolerance) -> Self {
        Self {
            rank_tol: t.rank_tol,
            residual_tol: t.residual_tol,
        }
    }
}

/// One query, check or summary line of a report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub index: usize,
    pub op: String,
    pub label: String,
    /// False when the operation raised an error.
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<bool>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra_dim: Option<usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<JsonMatrix>>,
}

impl Entry {
    pub fn new(index: usize, op: &str, label: impl Into<String>) -> Self {
        Self {
            index,
            op: op.into(),
            label: label.into(),
            ok: true,
            ..Default::default()
        }
    }

    pub fn failed(index: usize, op: &str, label: impl Into<String>, error: String) -> Self {
        Self {
            ok: false,
            error: Some(error),
            ..Self::new(index, op, label)
        }
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.into(), value.into());
        self
    }

    pub fn algebra(mut self, alg: &OperatorAlgebra, dump: bool) -> Self {
        self.algebra_dim = Some(alg.dim());
        if dump {
            self.basis = Some(alg.basis().iter().map(JsonMatrix::from_matrix).collect());
        }
        self
    }

    /// Sets `passed`: no error, and the verdict matches the expectation when
    /// one is given.
    pub fn settle(mut self) -> Self {
        self.passed = self.ok
            && match (self.expected, self.verdict) {
                (Some(e), Some(v)) => e == v,
                (Some(_), None) => false,
                (None, _) => true,
            };
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub entry_seconds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub input: InputEcho,
    pub seed: u64,
    pub tolerance: ToleranceEcho,
    pub results: Vec<Entry>,
    pub passed: bool,
    pub timing: Timing,
}

impl Report {
    pub fn new(input: InputEcho, seed: u64, tol: Tolerance, results: Vec<Entry>, timing: Timing) -> Self {
        let passed = results.iter().all(|e| e.passed);
        Self {
            schema: SCHEMA,
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            input,
            seed,
            tolerance: tol.into(),
            results,
            passed,
            timing,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The report as JSON with the `timing` field removed.
    pub fn body(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("timing");
        }
        v
    }

    /// One line per entry plus a summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for e in &self.results {
            let status = if e.passed { "PASS" } else { "FAIL" };
            let verdict = match (&e.error, e.verdict) {
                (Some(err), _) => format!("error: {err}"),
                (None, Some(v)) => v.to_string(),
                (None, None) => "done".into(),
            };
            let _ = write!(out, "{status}  [{}] {}", e.index, e.op);
            if !e.label.is_empty() {
                let _ = write!(out, " {}", e.label);
            }
            let _ = write!(out, ": {verdict}");
            if let Some(r) = e.residual {
                let _ = write!(out, " (residual {r:.2e})");
            }
            out.push('\n');
        }
        let failed = self.results.iter().filter(|e| !e.passed).count();
        let _ = writeln!(
            out,
            "{}: {} entries, {failed} failed",
            if self.passed { "ok" } else { "FAILED" },
            self.results.len()
        );
        out
    }
}
