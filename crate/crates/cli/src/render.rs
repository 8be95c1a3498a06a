//! Plain-text rendering of report values.

use serde_json::Value;

/// Writes `v` as indented `key: value` lines. Scalar lists stay on one line
/// and cyclotomic values `{level, coeffs}` print as polynomials in `z`, a
/// primitive root of unity of that level.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    block(v, 0, &mut out);
    out
}

fn block(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if let Some(s) = inline(x) {
                    out.push_str(&format!("{pad}{k}: {s}\n"));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    block(x, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if let Some(s) = inline(x) {
                    out.push_str(&format!("{pad}- {s}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    block(x, indent + 1, out);
                }
            }
        }
        scalar => out.push_str(&format!("{pad}{}\n", scalar_text(scalar))),
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(c) = cyclotomic(v) {
        return Some(c);
    }
    match v {
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(|x| cyclotomic(x).or_else(|| scalar(x))).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(map) if map.is_empty() => Some("{}".into()),
        other => scalar(other),
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Array(_) | Value::Object(_) => None,
        other => Some(scalar_text(other)),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `Σ c_k z^k` for an object of exactly the form `{"level": N, "coeffs": [...]}`.
fn cyclotomic(v: &Value) -> Option<String> {
    let map = v.as_object()?;
    if map.len() != 2 {
        return None;
    }
    map.get("level")?.as_u64()?;
    let coeffs: Option<Vec<i64>> = map.get("coeffs")?.as_array()?.iter().map(Value::as_i64).collect();
    Some(polynomial(&coeffs?))
}

pub fn polynomial(coeffs: &[i64]) -> String {
    let mut s = String::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        let sign = if c < 0 { "-" } else { "+" };
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        let power = match k {
            0 => String::new(),
            1 => "z".into(),
            _ => format!("z^{k}"),
        };
        if power.is_empty() {
            s.push_str(&mag.to_string());
        } else if mag == 1 {
            s.push_str(&power);
        } else {
            s.push_str(&format!("{mag}{power}"));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn polynomials() {
        assert_eq!(polynomial(&[0, 0]), "0");
        assert_eq!(polynomial(&[2]), "2");
        assert_eq!(polynomial(&[-1, 0, 1]), "-1 + z^2");
        assert_eq!(polynomial(&[0, -2, -1]), "-2z - z^2");
    }

    #[test]
    fn nested_values() {
        let v = json!({"a": 1, "b": [1, 2], "c": {"level": 3, "coeffs": [0, 1]}, "d": [{"x": "y"}]});
        assert_eq!(text(&v), "a: 1\nb: [1, 2]\nc: z\nd:\n  -\n    x: y\n");
    }
}
