//! Structured verification outcomes.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    pub n: usize,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

/// Outcome of one check. A failing report carries exactly one witness, a
/// passing one none.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub params: Params,
    pub status: Status,
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub millis: u64,
}

/// What a check body returns before timing is attached.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    /// Passed, with a remark (e.g. a restricted code path was taken).
    PassWith(String),
    Fail(Value),
    Skipped(String),
}

impl Report {
    pub fn run(check: &str, params: Params, body: impl FnOnce() -> Outcome) -> Report {
        let start = Instant::now();
        let outcome = body();
        let millis = start.elapsed().as_millis() as u64;
        let (status, witness, detail) = match outcome {
            Outcome::Pass => (Status::Pass, None, None),
            Outcome::PassWith(d) => (Status::Pass, None, Some(d)),
            Outcome::Fail(w) => (Status::Fail, Some(w), None),
            Outcome::Skipped(d) => (Status::Skipped, None, Some(d)),
        };
        Report { check: check.to_string(), params, status, witness, detail, millis }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn without_timing(mut self) -> Report {
        self.millis = 0;
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}
