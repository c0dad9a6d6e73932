//! Canonical report encodings: JSON with sorted keys and fixed float format, CSV with LF endings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::ReportError;

pub const SCHEMA_VERSION: &str = "1";

/// Floats print as `{:.16e}`, so equal bits give equal text on every platform.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: String,
    /// Digest of the canonical configuration text.
    pub config_digest: String,
    pub parameters: Value,
    pub result: Value,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, config_digest: &str, parameters: Value, result: impl Serialize, warnings: Vec<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config_digest: config_digest.to_string(),
            parameters,
            result: serde_json::to_value(result).expect("report values serialize"),
            warnings,
        }
    }

    pub fn to_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("report serializes"))
    }
}

fn write_json(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}:", serde_json::to_string(k).expect("keys serialize"));
                write_json(&map[k], out);
            }
            out.push('}');
        }
    }
}

/// Compact JSON with sorted keys and a trailing newline.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_json(v, &mut out);
    out.push('\n');
    out
}

/// A table cell rendered with the canonical float format.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format_float(n.as_f64().unwrap_or(f64::NAN)),
        other => {
            let mut s = String::new();
            write_json(other, &mut s);
            s
        }
    }
}

/// CSV with LF line endings. Every row must have `header.len()` cells.
pub fn to_csv(header: &[&str], rows: &[Vec<Value>]) -> Result<String, ReportError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(cell))?;
    }
    let bytes = w.into_inner().map_err(|e| ReportError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sorted_keys_and_fixed_floats() {
        let v = json!({"b": 0.1, "a": [1, 2.5], "c": {"z": null, "y": true}});
        assert_eq!(
            canonical_json(&v),
            "{\"a\":[1,2.5000000000000000e0],\"b\":1.0000000000000001e-1,\"c\":{\"y\":true,\"z\":null}}\n"
        );
    }

    #[test]
    fn csv_uses_lf() {
        let text = to_csv(&["x", "y"], &[vec![json!(1), json!(0.5)], vec![json!("a,b"), Value::Null]]).unwrap();
        assert_eq!(text, "x,y\n1,5.0000000000000000e-1\n\"a,b\",\n");
    }

    #[test]
    fn report_carries_schema() {
        let r = Report::new("zeta", "abc", json!({}), json!({"value": 1.0}), vec![]);
        let text = r.to_json();
        assert!(text.contains("\"schema_version\":\"1\""));
        assert!(text.starts_with("{\"command\":\"zeta\""));
    }
}
