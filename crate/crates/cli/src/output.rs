use std::fmt::Write as _;

use clap::ValueEnum;
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Human,
    Records,
}

/// Collected records of one run plus what they imply for the exit code.
#[derive(Debug, Default)]
pub struct Report {
    records: Vec<Value>,
    finding: bool,
    truncated: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a record; `fields` must be a JSON object.
    pub fn push(&mut self, kind: &str, fields: Value) {
        let mut map = match fields {
            Value::Object(m) => m,
            other => panic!("record fields must be an object, got {other}"),
        };
        map.insert("record".into(), Value::String(kind.into()));
        self.records.push(Value::Object(map));
    }

    pub fn flag_finding(&mut self, cond: bool) {
        self.finding |= cond;
    }

    pub fn truncated(&mut self) {
        self.truncated = true;
    }

    pub fn exit_code(&self) -> u8 {
        if self.finding {
            1
        } else if self.truncated {
            3
        } else {
            0
        }
    }

    fn status(&self) -> &'static str {
        match self.exit_code() {
            0 => "pass",
            1 => "finding",
            _ => "incomplete",
        }
    }

    pub fn render(&self, format: Format, header: &Value) -> String {
        let summary = json!({ "record": "summary", "status": self.status(), "exit_code": self.exit_code() });
        match format {
            Format::Records => {
                let mut out = String::new();
                for v in std::iter::once(header).chain(&self.records).chain(std::iter::once(&summary)) {
                    out.push_str(&serde_json::to_string(v).expect("values serialize"));
                    out.push('\n');
                }
                out
            }
            Format::Human => {
                let mut out = String::new();
                for v in &self.records {
                    human_record(&mut out, v);
                }
                let _ = writeln!(out, "status: {} (exit {})", self.status(), self.exit_code());
                out
            }
        }
    }
}

fn human_record(out: &mut String, v: &Value) {
    let Value::Object(map) = v else { return };
    let kind = map.get("record").and_then(Value::as_str).unwrap_or("record");
    let _ = writeln!(out, "{kind}");
    let width = map.keys().filter(|k| *k != "record").map(String::len).max().unwrap_or(0);
    for (key, value) in map.iter().filter(|(k, _)| *k != "record") {
        let _ = writeln!(out, "  {key:width$}  {}", human_value(value));
    }
}

fn human_value(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Header record: format version, command parameters and seed.
pub fn header(command: &impl Serialize, seed: u64, budget: u64) -> Value {
    json!({
        "record": "header",
        "tool": "flagdeg",
        "version": env!("CARGO_PKG_VERSION"),
        "format_version": FORMAT_VERSION,
        "command": command,
        "seed": seed,
        "budget": budget,
    })
}

pub fn big(x: &BigUint) -> Value {
    Value::String(x.to_string())
}
