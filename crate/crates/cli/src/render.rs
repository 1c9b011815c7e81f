use serde_json::Value;

use crate::Format;

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text(value),
    }
}

/// One `key: value` line per top-level field; lists of records get one
/// indented line per record.
fn text(value: &Value) -> String {
    let Value::Object(map) = value else {
        return format!("{}\n", scalar(value));
    };
    let mut out = String::new();
    for (key, v) in map {
        if key == "schema_version" {
            continue;
        }
        match v {
            Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                out.push_str(&format!("{key}:\n"));
                for item in items {
                    out.push_str(&format!("  {}\n", scalar(item)));
                }
            }
            _ => out.push_str(&format!("{key}: {}\n", scalar(v))),
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(", "),
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| format!("{k}={}", scalar(x)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_flattens_records() {
        let v = json!({"schema_version": 1, "pos": "23/22", "forests": [["a", "b"]], "ok": true});
        assert_eq!(render(&v, Format::Text), "forests:\n  a, b\nok: true\npos: 23/22\n");
    }
}
