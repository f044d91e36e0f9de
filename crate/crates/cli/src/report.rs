//! Machine-readable command reports and their plain-text rendering.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct Check(pub String, pub bool);

#[derive(Debug, Clone, Default, Serialize)]
pub struct Verification {
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Caps {
    pub max_order: usize,
    pub degree_cap: usize,
    pub budget_ms: Option<u64>,
}

/// One command's report. Field order is the serialization order; `result` and
/// `inputs` are JSON objects, whose keys serialize sorted.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub verification: Verification,
    pub caps: Caps,
    /// Left empty so identical runs give identical bytes.
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn all_checks_pass(&self) -> bool {
        self.verification.checks.iter().all(|c| c.1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        render(&self.result, "", &mut out);
        for Check(name, pass) in &self.verification.checks {
            out.push_str(&format!("check {name}: {}\n", if *pass { "pass" } else { "FAIL" }));
        }
        out
    }
}

fn render(v: &Value, indent: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        out.push_str(&format!("{indent}{k}:\n"));
                        render(v, &format!("{indent}  "), out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        out.push_str(&format!("{indent}{k}:\n"));
                        for (i, item) in items.iter().enumerate() {
                            out.push_str(&format!("{indent}  [{i}]\n"));
                            render(item, &format!("{indent}    "), out);
                        }
                    }
                    Value::Array(items) => {
                        out.push_str(&format!("{indent}{k}:"));
                        if items.is_empty() {
                            out.push_str(" (none)");
                        }
                        out.push('\n');
                        for item in items {
                            out.push_str(&format!("{indent}  {}\n", scalar(item)));
                        }
                    }
                    _ => out.push_str(&format!("{indent}{k}: {}\n", scalar(v))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                render(item, indent, out);
            }
        }
        other => out.push_str(&format!("{indent}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// Lowercase hex SHA-256 of a string.
pub fn digest(s: &str) -> String {
    Sha256::digest(s.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}
