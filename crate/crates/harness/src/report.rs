//! Report layout. Maps are ordered, so serialization is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use freefield::rational::fmt_q_full;
use freefield::Q;

use crate::scenario::Scenario;

pub const TOOL: &str = "freefield-verify";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub index: usize,
    pub task: String,
    pub status: Status,
    pub summary: String,
    pub measured: BTreeMap<String, Value>,
    pub witnesses: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub scenario: Scenario,
    pub tasks: Vec<TaskReport>,
    pub passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Rationals travel as "p/q" strings.
pub fn rational(x: &Q) -> Value {
    Value::String(fmt_q_full(x))
}

/// What a task hands back before it is numbered.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub ok: bool,
    pub summary: String,
    pub measured: BTreeMap<String, Value>,
    pub witnesses: Vec<Value>,
}

impl Outcome {
    pub fn measure(&mut self, key: &str, v: impl Into<Value>) {
        self.measured.insert(key.to_string(), v.into());
    }

    pub fn witness(&mut self, v: Value) {
        self.witnesses.push(v);
    }
}
