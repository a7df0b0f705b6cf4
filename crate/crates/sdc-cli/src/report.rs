//! Report rendering.
//!
//! JSON output is canonical: object keys sorted, floats printed with 12
//! significant digits, no whitespace. Two runs with the same config are
//! byte-identical, and parsing a canonical document and re-rendering it
//! reproduces the same bytes. CSV sticks to documented stable headers.
//! Pretty output is for humans and explicitly non-stable.

use serde::Serialize;
use serde_json::Value;

/// 12 significant digits, scientific notation.
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Float column rendering for CSV: finite values use the canonical
/// 12-digit form, non-finite values spell themselves out.
pub fn fmt_csv_f64(x: f64) -> String {
    if x.is_finite() {
        fmt_sig12(x)
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Minimal CSV field escaping: quote when a comma, quote, or newline is
/// present (state specs may contain paths).
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Canonical JSON for any serializable report.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize infallibly");
    let mut out = String::new();
    write_value(&v, &mut out);
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                // non-finite floats never reach here: serde_json maps
                // them to null at to_value time
                out.push_str(&fmt_sig12(n.as_f64().expect("numeric")));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string escapes"));
        }
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
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("string escapes"));
                out.push(':');
                write_value(&map[*k], out);
            }
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_use_12_significant_digits() {
        assert_eq!(fmt_sig12(0.5), "5.00000000000e-1");
        assert_eq!(fmt_sig12(20.321928094887362), "2.03219280949e1");
        assert_eq!(fmt_sig12(0.0), "0.00000000000e0");
        assert_eq!(fmt_sig12(-1.0), "-1.00000000000e0");
    }

    #[test]
    fn keys_are_sorted_and_output_is_compact() {
        let v = json!({"zeta": 1, "alpha": {"b": 0.5, "a": true}, "mid": [1, 2.0]});
        assert_eq!(
            canonical_json(&v),
            r#"{"alpha":{"a":true,"b":5.00000000000e-1},"mid":[1,2.00000000000e0],"zeta":1}"#
        );
    }

    #[test]
    fn canonical_rendering_is_idempotent_through_parsing() {
        let v = json!({"x": 0.9133333333333333, "y": [1e-300, 230473.0265486896]});
        let s1 = canonical_json(&v);
        let reparsed: Value = serde_json::from_str(&s1).unwrap();
        let s2 = canonical_json(&reparsed);
        assert_eq!(s1, s2);
    }

    #[test]
    fn csv_escaping() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(fmt_csv_f64(f64::INFINITY), "inf");
    }
}
