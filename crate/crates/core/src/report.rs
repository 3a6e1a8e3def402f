//! Machine-readable suite reports.
//!
//! A report is deterministic for a fixed configuration and seed except for
//! its single timing field: records are keyed and sorted by a content
//! digest of their input.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Hex digest (truncated SHA-256) of a JSON value. `serde_json` maps are
/// ordered, so equal values digest equally.
pub fn digest_of(value: &Value) -> String {
    let canonical = serde_json::to_string(value).expect("JSON serialisation cannot fail");
    let hash = Sha256::digest(canonical.as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// One checked case: the engine and oracle verdicts plus the witness. A
/// failing case additionally embeds its full reproduction input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseRecord {
    pub digest: String,
    pub label: String,
    pub engine: Value,
    pub oracle: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub pass: bool,
    /// Minimised reproduction (input and scale) for failing cases.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repro: Option<Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: Value,
    pub passed: usize,
    pub failed: usize,
    /// Wall-clock duration; the only field allowed to vary between runs.
    pub wall_ms: u128,
    pub cases: Vec<CaseRecord>,
}

impl Report {
    pub fn new(suite: &str, config: Value) -> Self {
        Report {
            suite: suite.to_string(),
            config,
            passed: 0,
            failed: 0,
            wall_ms: 0,
            cases: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CaseRecord) {
        if record.pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.cases.push(record);
    }

    /// Sort records into their canonical digest order.
    pub fn finalize(&mut self, wall_ms: u128) {
        self.wall_ms = wall_ms;
        self.cases
            .sort_by(|a, b| a.digest.cmp(&b.digest).then(a.label.cmp(&b.label)));
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialisation cannot fail")
    }

    /// The report with its timing field zeroed, for byte-comparisons.
    pub fn timeless_json(&self) -> String {
        let mut clone = self.clone();
        clone.wall_ms = 0;
        clone.to_json_string()
    }
}
