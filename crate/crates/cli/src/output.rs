//! Report rendering: JSON lines for machines, aligned key/value text for people.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Jsonl,
}

/// What a command produced: named report records and an optional file artifact.
#[derive(Default)]
pub struct Output {
    pub records: Vec<(&'static str, Value)>,
    pub artifact: Option<Vec<u8>>,
}

impl Output {
    pub fn record(&mut self, name: &'static str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report types serialize to JSON");
        self.records.push((name, value));
    }
}

pub fn render(records: &[(&'static str, Value)], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Jsonl => {
            for (name, value) in records {
                let line = serde_json::json!({ "record": name, "data": value });
                out.push_str(&line.to_string());
                out.push('\n');
            }
        }
        Format::Text => {
            for (name, value) in records {
                let mut rows = Vec::new();
                flatten("", value, &mut rows);
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                out.push_str(&format!("[{name}]\n"));
                for (k, v) in rows {
                    out.push_str(&format!("{k:<width$}  {v}\n"));
                }
            }
        }
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(_) | Value::Object(_) => None,
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, rows);
            }
        }
        Value::Array(items) => {
            let flat: Option<Vec<String>> = items.iter().map(scalar).collect();
            match flat {
                Some(parts) if parts.is_empty() => rows.push((prefix.into(), "[]".into())),
                Some(parts) => rows.push((prefix.into(), parts.join(" "))),
                None => {
                    for (i, child) in items.iter().enumerate() {
                        flatten(&format!("{prefix}[{i}]"), child, rows);
                    }
                }
            }
        }
        _ => rows.push((prefix.into(), scalar(v).expect("scalar"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_is_aligned_and_flat() {
        let recs = vec![(
            "result",
            json!({"a": 1, "long_key": {"x": [1, 2], "y": null}, "rows": [{"k": true}]}),
        )];
        let text = render(&recs, Format::Text);
        assert_eq!(
            text,
            "[result]\na           1\nlong_key.x  1 2\nlong_key.y  -\nrows[0].k   true\n"
        );
    }

    #[test]
    fn jsonl_is_one_line_per_record() {
        let recs = vec![("config", json!({"seed": 0})), ("result", json!([]))];
        let text = render(&recs, Format::Jsonl);
        assert_eq!(
            text,
            "{\"data\":{\"seed\":0},\"record\":\"config\"}\n{\"data\":[],\"record\":\"result\"}\n"
        );
    }
}
