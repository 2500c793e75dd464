//! Machine-readable command reports: one record per check plus an optional
//! verdict.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    pub pass: bool,
}

impl CheckRecord {
    /// `value ≤ threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value: Value::from(value),
            threshold: Some(threshold),
            pass: value <= threshold,
        }
    }

    pub fn flag(name: impl Into<String>, value: impl Into<Value>, pass: bool) -> Self {
        Self {
            name: name.into(),
            value: value.into(),
            threshold: None,
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// Hex SHA-256 of the raw input bytes.
    pub inputs_digest: String,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Value>,
    /// Command-specific payload, e.g. a conjugator and conjugated generators.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
}

impl Report {
    pub fn new(command: impl Into<String>, input: &[u8]) -> Self {
        Self {
            command: command.into(),
            inputs_digest: hex::encode(Sha256::digest(input)),
            checks: Vec::new(),
            verdict: None,
            output: None,
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line per check, then the verdict kind if present.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} (input sha256 {})\n", self.command, self.inputs_digest);
        for c in &self.checks {
            let status = if c.pass { "ok  " } else { "FAIL" };
            match c.threshold {
                Some(t) => out.push_str(&format!("{status} {}: {} (threshold {t:e})\n", c.name, c.value)),
                None => out.push_str(&format!("{status} {}: {}\n", c.name, c.value)),
            }
        }
        if let Some(kind) = self.verdict.as_ref().and_then(|v| v.get("kind")) {
            out.push_str(&format!("verdict: {}\n", kind.as_str().unwrap_or_default()));
        }
        out
    }
}
