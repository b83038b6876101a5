use std::io::Write;

use serde_json::Value;

use crate::{Format, Outcome};

/// Write errors (a closed pipe) are ignored.
pub fn print(outcome: &Outcome, format: Format) {
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&outcome.report).expect("reports serialize"));
        }
        Format::Table => {
            let lines = if outcome.table.is_empty() {
                flatten(&outcome.report)
            } else {
                outcome.table.clone()
            };
            for line in lines {
                if writeln!(out, "{line}").is_err() {
                    break;
                }
            }
        }
    }
}

/// One `path  value` row per scalar leaf.
pub fn flatten(v: &Value) -> Vec<String> {
    let mut rows = Vec::new();
    walk(v, String::new(), &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.into_iter().map(|(k, v)| format!("{k:<width$}  {v}")).collect()
}

fn walk(v: &Value, path: String, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                walk(x, join(k), rows);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            rows.push((path, v.to_string()));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                walk(x, join(&i.to_string()), rows);
            }
        }
        _ => rows.push((path, v.to_string())),
    }
}
