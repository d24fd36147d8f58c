//! Plain-text rendering: one `path: value` line per leaf of the JSON report.

use serde_json::Value;

pub(crate) fn text(report: &Value) -> String {
    let mut out = String::new();
    walk(report, "", &mut out);
    out
}

fn walk(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let next = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(x, &next, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                walk(x, &format!("{path}[{i}]"), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{path}: {s}\n")),
        other => out.push_str(&format!("{path}: {other}\n")),
    }
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    #[test]
    fn flattens_nested_values() {
        let v = json!({"a": {"b": [1, "x"]}, "c": [], "d": null});
        assert_eq!(super::text(&v), "a.b[0]: 1\na.b[1]: x\nc: []\nd: null\n");
    }
}
