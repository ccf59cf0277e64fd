use serde::Serialize;
use serde_json::Value;

use super::RunError;

/// Canonical text of a JSON value: object keys sorted, no whitespace except
/// a trailing newline, integers verbatim and every float as `{:.16e}`.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out.push('\n');
    out
}

/// Serializes `v` and renders it canonically.
pub fn to_canonical_json<T: Serialize>(v: &T) -> Result<String, RunError> {
    let value = serde_json::to_value(v).map_err(|e| RunError::Solver(e.to_string()))?;
    Ok(canonical_json(&value))
}

fn write_value(v: &Value, out: &mut String) {
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
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
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
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(&map[k], out);
            }
            out.push('}');
        }
    }
}

/// 17 significant digits, which round-trips every finite `f64`.
pub(crate) fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no infinities; serde_json maps them to null as well
        "null".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_floats_fixed() {
        let v = json!({"b": 1.0, "a": [2, 0.5], "c": {"z": "s", "y": null}});
        assert_eq!(
            canonical_json(&v),
            "{\"a\":[2,5.0000000000000000e-1],\"b\":1.0000000000000000e0,\"c\":{\"y\":null,\"z\":\"s\"}}\n"
        );
    }

    #[test]
    fn floats_round_trip() {
        for x in [std::f64::consts::LN_2, 1e-300, -3.5, 0.1 + 0.2, 5e-324] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let v: Value = serde_json::from_str(&s).unwrap();
            assert_eq!(v.as_f64().unwrap(), x);
        }
    }

    #[test]
    fn canonical_text_is_a_fixed_point() {
        let v = json!({"k": [0.3, 7, {"m": -1e-20}]});
        let once = canonical_json(&v);
        let again = canonical_json(&serde_json::from_str(&once).unwrap());
        assert_eq!(once, again);
    }
}
