//! Reports shared by the command-line front end and the test harnesses.
//!
//! A report carries the command echo, a status, a JSON payload tree whose
//! field order is fixed by construction, and wall-clock timing kept outside
//! the payload so that identical inputs give byte-identical payloads.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }

    pub fn from_passed(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub status: Status,
    /// Name of the first failing check, when the status is `fail`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_check: Option<String>,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: Vec<String>, status: Status, payload: Value) -> Self {
        Report {
            command,
            status,
            failed_check: None,
            payload,
            timing_ms: None,
        }
    }

    pub fn with_failure(mut self, check: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.failed_check = Some(check.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn payload_json(&self) -> String {
        serde_json::to_string_pretty(&self.payload).expect("payloads serialize")
    }

    /// Aligned plain text: header lines, then the payload tree with scalar
    /// leaves padded to a common key column per object.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command  {}", self.command.join(" "));
        let _ = writeln!(out, "status   {}", self.status.as_str());
        if let Some(c) = &self.failed_check {
            let _ = writeln!(out, "failed   {c}");
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "time     {t:.1} ms");
        }
        render(&self.payload, 0, &mut out);
        out
    }
}

/// Converts any serializable value into a payload tree.
pub fn payload<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payloads serialize")
}

/// Builds an object payload preserving insertion order.
pub fn object(fields: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in fields {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

fn is_inline(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()) || a.is_empty(),
        Value::Object(o) => o.is_empty(),
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) => {
            let parts: Vec<String> = a.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            let width = m
                .iter()
                .filter(|(_, x)| is_inline(x))
                .map(|(k, _)| k.len())
                .max()
                .unwrap_or(0);
            for (k, x) in m {
                if is_inline(x) {
                    let _ = writeln!(out, "{pad}{k:<width$}  {}", scalar(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}");
                    render(x, depth + 1, out);
                }
            }
        }
        Value::Array(a) if !is_inline(v) => {
            for (i, x) in a.iter().enumerate() {
                if is_inline(x) {
                    let _ = writeln!(out, "{pad}[{i}] {}", scalar(x));
                } else {
                    let _ = writeln!(out, "{pad}[{i}]");
                    render(x, depth + 1, out);
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other));
        }
    }
}
