use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::run::read_report;
use super::RunError;

/// Absolute tolerances for float fields. A field is looked up by its full
/// path (`result.levels[0].value`) first, then by its key (`value`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareTolerances {
    pub default: f64,
    pub fields: BTreeMap<String, f64>,
}

impl Default for CompareTolerances {
    fn default() -> Self {
        Self {
            default: 1e-9,
            fields: BTreeMap::new(),
        }
    }
}

impl CompareTolerances {
    fn for_field(&self, path: &str, key: &str) -> f64 {
        self.fields
            .get(path)
            .or_else(|| self.fields.get(key))
            .copied()
            .unwrap_or(self.default)
    }
}

/// One mismatch, located by a JSON path such as `result.repellers[2].hausdorff`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diff {
    pub path: String,
    pub a: String,
    pub b: String,
}

impl std::fmt::Display for Diff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} vs {}", self.path, self.a, self.b)
    }
}

/// Compares two report files. Both must parse as reports of the same
/// command; the library version is not compared.
pub fn compare_files(a: &Path, b: &Path, tol: &CompareTolerances) -> Result<Vec<Diff>, RunError> {
    let ra = read_report(a)?;
    let rb = read_report(b)?;
    if ra.command != rb.command {
        return Err(RunError::Schema(format!(
            "reports come from different commands: {} vs {}",
            ra.command.as_str(),
            rb.command.as_str()
        )));
    }
    let strip = |r| -> Result<Value, RunError> {
        let mut v = serde_json::to_value(r).map_err(|e| RunError::Schema(e.to_string()))?;
        if let Value::Object(m) = &mut v {
            m.remove("library_version");
        }
        Ok(v)
    };
    compare_values(&strip(&ra)?, &strip(&rb)?, tol)
}

/// Field-by-field diff of two JSON values.
pub fn compare_values(a: &Value, b: &Value, tol: &CompareTolerances) -> Result<Vec<Diff>, RunError> {
    let mut out = Vec::new();
    walk("", "", a, b, tol, &mut out);
    Ok(out)
}

fn show(v: Option<&Value>) -> String {
    v.map_or_else(|| "<missing>".to_string(), |v| v.to_string())
}

fn walk(path: &str, key: &str, a: &Value, b: &Value, tol: &CompareTolerances, out: &mut Vec<Diff>) {
    let diff = |out: &mut Vec<Diff>, a: Option<&Value>, b: Option<&Value>| {
        out.push(Diff {
            path: path.to_string(),
            a: show(a),
            b: show(b),
        })
    };
    match (a, b) {
        (Value::Object(ma), Value::Object(mb)) => {
            let mut keys: Vec<&String> = ma.keys().chain(mb.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                let sub = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                match (ma.get(k), mb.get(k)) {
                    (Some(x), Some(y)) => walk(&sub, k, x, y, tol, out),
                    (x, y) => out.push(Diff {
                        path: sub,
                        a: show(x),
                        b: show(y),
                    }),
                }
            }
        }
        (Value::Array(xa), Value::Array(xb)) => {
            if xa.len() != xb.len() {
                out.push(Diff {
                    path: format!("{path}.len"),
                    a: xa.len().to_string(),
                    b: xb.len().to_string(),
                });
            }
            for (i, (x, y)) in xa.iter().zip(xb).enumerate() {
                walk(&format!("{path}[{i}]"), key, x, y, tol, out);
            }
        }
        (Value::Number(x), Value::Number(y)) => {
            let exact = !x.is_f64() && !y.is_f64();
            let same = if exact {
                x == y
            } else {
                match (x.as_f64(), y.as_f64()) {
                    (Some(p), Some(q)) => (p - q).abs() <= tol.for_field(path, key),
                    _ => false,
                }
            };
            if !same {
                diff(out, Some(a), Some(b));
            }
        }
        _ => {
            if a != b {
                diff(out, Some(a), Some(b));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn identical_values_have_no_diff() {
        let v = json!({"a": [1, 2.5], "b": {"c": "x"}});
        assert!(compare_values(&v, &v, &CompareTolerances::default()).unwrap().is_empty());
    }

    #[test]
    fn float_within_tolerance_passes() {
        let a = json!({"shadow_distance": 1.0e-3});
        let b = json!({"shadow_distance": 1.0e-3 + 1e-12});
        assert!(compare_values(&a, &b, &CompareTolerances::default()).unwrap().is_empty());
        let tight = CompareTolerances {
            default: 1e-9,
            fields: [("shadow_distance".to_string(), 1e-15)].into(),
        };
        assert_eq!(compare_values(&a, &b, &tight).unwrap().len(), 1);
    }

    #[test]
    fn path_tolerance_beats_key_tolerance() {
        let a = json!({"r": [{"v": 1.0}, {"v": 2.0}]});
        let b = json!({"r": [{"v": 1.0 + 1e-6}, {"v": 2.0 + 1e-6}]});
        let tol = CompareTolerances {
            default: 1e-9,
            fields: [("r[0].v".to_string(), 1e-3)].into(),
        };
        let diffs = compare_values(&a, &b, &tol).unwrap();
        assert_eq!(diffs.len(), 1);
        assert_eq!(diffs[0].path, "r[1].v");
    }

    #[test]
    fn integer_mismatch_lists_the_row() {
        let a = json!({"repellers": [{"period": 3}, {"period": 5}]});
        let b = json!({"repellers": [{"period": 3}, {"period": 6}]});
        let d = compare_values(&a, &b, &CompareTolerances::default()).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].path, "repellers[1].period");
    }

    #[test]
    fn length_and_key_differences_are_reported() {
        let a = json!({"xs": [1, 2], "k": 1});
        let b = json!({"xs": [1]});
        let d = compare_values(&a, &b, &CompareTolerances::default()).unwrap();
        assert!(d.iter().any(|x| x.path == "xs.len"));
        assert!(d.iter().any(|x| x.path == "k" && x.b == "<missing>"));
    }
}
