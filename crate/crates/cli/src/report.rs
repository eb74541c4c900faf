//! Canonical report values: sorted keys, rationals as `"num/den"` strings,
//! integers as JSON numbers when they fit in `u64` and decimal strings
//! otherwise.

use hcn_core::{BigInt, Rational};
use num_traits::ToPrimitive;
use serde_json::Value;

pub fn int(n: &BigInt) -> Value {
    match n.to_u64() {
        Some(x) => Value::from(x),
        None => Value::String(n.to_string()),
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// Renders a report as `path: value` lines in key order.
pub fn to_text(value: &Value) -> String {
    let mut out = String::new();
    walk(value, String::new(), &mut out);
    out
}

fn walk(value: &Value, path: String, out: &mut String) {
    let join = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                walk(v, join(k), out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object()) => {
            for (k, v) in items.iter().enumerate() {
                walk(v, join(&k.to_string()), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{path}: {s}\n")),
        other => out.push_str(&format!("{path}: {other}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_values() {
        let r = Rational::new(BigInt::from(169), BigInt::from(5));
        assert_eq!(rational(&r), json!("169/5"));
        assert_eq!(rational(&Rational::from_integer(BigInt::from(12))), json!("12"));
        assert_eq!(int(&BigInt::from(82)), json!(82));
        let big = BigInt::from(u64::MAX) * 10;
        assert_eq!(int(&big), json!("184467440737095516150"));
    }

    #[test]
    fn text_lines_follow_key_order() {
        let v = json!({"h": {"2": 14, "1": 64}, "mass": "169/5", "list": [[1, 2]]});
        assert_eq!(to_text(&v), "h.1: 64\nh.2: 14\nlist: [[1,2]]\nmass: 169/5\n");
    }
}
