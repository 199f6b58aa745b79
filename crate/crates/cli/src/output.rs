use std::fmt::Display;

use serde_json::{json, Map, Value};
use thiserror::Error;

pub const SCHEMA: &str = "cfx/1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(_) => "domain",
            CliError::Budget(_) => "budget",
        }
    }
}

pub fn usage(e: impl Display) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn domain(e: impl Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// A finished command: the JSON body, a text rendering, and the exit code
/// (`3` when a result was produced but the iteration budget ran out).
pub struct Report {
    pub command: &'static str,
    pub paper_ref: &'static str,
    pub body: Map<String, Value>,
    pub text: Vec<String>,
    pub code: i32,
}

impl Report {
    pub fn new(command: &'static str, paper_ref: &'static str) -> Self {
        Report {
            command,
            paper_ref,
            body: Map::new(),
            text: Vec::new(),
            code: 0,
        }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.body.insert(key.to_string(), v.into());
        self
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.text.push(s.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = self.body.clone();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("command".into(), self.command.into());
        m.insert("paper_ref".into(), self.paper_ref.into());
        Value::Object(m)
    }
}

pub fn error_json(command: &str, e: &CliError) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "error": { "kind": e.kind(), "message": e.to_string() },
    })
}

/// Pretty JSON with sorted keys; re-emitting a parsed document reproduces it.
pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

/// Exact values leave as strings.
pub fn s(x: impl Display) -> Value {
    Value::String(x.to_string())
}

pub fn strs<T: Display>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(s).collect())
}

/// Floats only in `_approx` fields; non-finite values become `null`.
pub fn approx(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn approxs(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| approx(x)).collect())
}
