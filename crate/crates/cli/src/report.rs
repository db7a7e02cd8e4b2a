//! Run reports: one per command, serializable as JSON or plain text.

use elemop::json::MatrixJson;
use elemop::QMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub matrix: MatrixJson,
}

impl Witness {
    pub fn new(name: impl Into<String>, m: &QMatrix) -> Self {
        Self { name: name.into(), matrix: m.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl ToString, actual: impl ToString, passed: bool) -> Self {
        Self {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            passed,
            witnesses: Vec::new(),
        }
    }

    /// Check that `actual == expected`, both rendered with `Display`.
    pub fn eq<T: PartialEq + ToString>(name: impl Into<String>, expected: T, actual: T) -> Self {
        let passed = expected == actual;
        Self::new(name, expected.to_string(), actual.to_string(), passed)
    }

    /// Exact matrix equality; the actual matrix is attached on failure.
    pub fn matrix(name: impl Into<String>, expected: &QMatrix, actual: &QMatrix) -> Self {
        let c = Self::new(name, render(expected), render(actual), expected == actual);
        if c.passed {
            c
        } else {
            c.with_witness("actual", actual)
        }
    }

    pub fn with_witness(mut self, name: impl Into<String>, m: &QMatrix) -> Self {
        self.witnesses.push(Witness::new(name, m));
        self
    }
}

/// Compact one-line form of a matrix.
pub fn render(m: &QMatrix) -> String {
    let rows: Vec<String> = m
        .rows()
        .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the command's inputs (arguments and file contents).
    pub inputs: String,
    pub outcome: Outcome,
    pub details: Vec<Check>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, inputs: String) -> Self {
        Self { command: command.into(), inputs, outcome: Outcome::Pass, details: Vec::new() }
    }

    pub fn error(command: impl Into<String>, inputs: String, message: impl ToString) -> Self {
        let mut r = Self::new(command, inputs);
        r.outcome = Outcome::Error;
        r.details.push(Check::new("error", "-", message.to_string(), false));
        r
    }

    pub fn push(&mut self, check: Check) {
        self.details.push(check);
    }

    /// Pass iff every check passed; an empty report passes.
    pub fn finish(mut self) -> Self {
        if self.outcome != Outcome::Error {
            self.outcome = if self.details.iter().all(|c| c.passed) { Outcome::Pass } else { Outcome::Fail };
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} [{}]\n", self.command, short(&self.inputs));
        for c in &self.details {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark} {}: expected {}, actual {}\n", c.name, c.expected, c.actual));
            for w in &c.witnesses {
                out.push_str(&format!("    {} = {}\n", w.name, serde_json::to_string(&w.matrix).expect("matrix")));
            }
        }
        out.push_str(&format!("outcome: {:?}\n", self.outcome));
        out
    }
}

fn short(digest: &str) -> &str {
    &digest[..digest.len().min(12)]
}

/// SHA-256 over length-prefixed parts, hex encoded.
pub fn digest<I, P>(parts: I) -> String
where
    I: IntoIterator<Item = P>,
    P: AsRef<[u8]>,
{
    let mut h = Sha256::new();
    for p in parts {
        let p = p.as_ref();
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

/// Report plus the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub report: RunReport,
    pub exit_code: i32,
}

impl Run {
    pub fn new(report: RunReport, exit_code: i32) -> Self {
        Self { report, exit_code }
    }

    /// Exit 0 on Pass, 1 on Fail, 2 on Error.
    pub fn from_report(report: RunReport) -> Self {
        let report = report.finish();
        let exit_code = match report.outcome {
            Outcome::Pass => EXIT_OK,
            Outcome::Fail => EXIT_NEGATIVE,
            Outcome::Error => EXIT_USAGE,
        };
        Self { report, exit_code }
    }

    pub fn usage(command: &str, inputs: String, message: impl ToString) -> Self {
        Self { report: RunReport::error(command, inputs, message), exit_code: EXIT_USAGE }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_byte_identical() {
        let mut r = RunReport::new("check", digest(["a", "b"]));
        r.push(Check::eq("order", 3, 4).with_witness("d", &QMatrix::unit(2, 0, 1)));
        r.push(Check::new("ok", "x", "x", true));
        let r = r.finish();
        assert_eq!(r.outcome, Outcome::Fail);
        let s = r.to_json();
        assert_eq!(RunReport::from_json(&s).unwrap().to_json(), s);
    }

    #[test]
    fn digest_separates_parts() {
        assert_ne!(digest(["ab", "c"]), digest(["a", "bc"]));
        assert_eq!(digest(["x"]).len(), 64);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Run::from_report(RunReport::new("c", String::new())).exit_code, EXIT_OK);
        let mut r = RunReport::new("c", String::new());
        r.push(Check::new("n", 1, 2, false));
        assert_eq!(Run::from_report(r).exit_code, EXIT_NEGATIVE);
        assert_eq!(Run::usage("c", String::new(), "bad").exit_code, EXIT_USAGE);
    }
}
