//! JSON fan documents and the bundled corpus.
//!
//! ```json
//! { "name": "P2", "dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2], [0, 2]] }
//! ```

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::exterior::LatticeVector;
use crate::fan::Fan;
use crate::linalg::abs_gcd;

const FIELDS: [&str; 4] = ["name", "dim", "rays", "max_cones"];

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), message: message.into() }
}

fn integer_array<T>(v: &Value, path: &str, convert: impl Fn(&Value) -> Option<T>, what: &str) -> Result<Vec<T>> {
    let items = v.as_array().ok_or_else(|| schema(path, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| convert(x).ok_or_else(|| schema(format!("{path}[{i}]"), format!("expected {what}"))))
        .collect()
}

fn nested<T>(obj: &Map<String, Value>, key: &str, convert: impl Fn(&Value) -> Option<T> + Copy, what: &str) -> Result<Vec<Vec<T>>> {
    let v = obj.get(key).ok_or_else(|| schema(key, "missing field"))?;
    let outer = v.as_array().ok_or_else(|| schema(key, "expected an array of arrays"))?;
    outer.iter().enumerate().map(|(i, row)| integer_array(row, &format!("{key}[{i}]"), convert, what)).collect()
}

/// Parses a fan document. Syntax errors carry line and column, schema
/// errors the offending field path. Duplicate rays, non-primitive rays and
/// out-of-range cone indices are rejected; smoothness and completeness are
/// left to [`Fan::validate`].
pub fn parse_fan(text: &str) -> Result<Fan> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
    })?;
    let obj = doc.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    if let Some(extra) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(schema(extra.as_str(), "unknown field"));
    }
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(schema("name", "expected a string")),
    };
    let dim = obj
        .get("dim")
        .ok_or_else(|| schema("dim", "missing field"))?
        .as_u64()
        .ok_or_else(|| schema("dim", "expected a positive integer"))? as usize;
    let rays = nested(obj, "rays", Value::as_i64, "an integer")?;
    let cones = nested(obj, "max_cones", |v| v.as_u64().map(|x| x as usize), "a non-negative integer index")?;

    for (i, r) in rays.iter().enumerate() {
        if r.len() != dim {
            return Err(schema(format!("rays[{i}]"), format!("expected {dim} coordinates, found {}", r.len())));
        }
        let g = abs_gcd(r);
        if g != 1 {
            return Err(Error::NotPrimitive { index: i, coords: r.clone(), gcd: g });
        }
        if let Some(j) = rays[..i].iter().position(|s| s == r) {
            return Err(Error::DuplicateRay { first: j, second: i });
        }
    }
    for (c, cone) in cones.iter().enumerate() {
        if let Some(&index) = cone.iter().find(|&&x| x >= rays.len()) {
            return Err(Error::RayIndexOutOfRange { cone: c, index, rays: rays.len() });
        }
    }
    let fan = Fan::new(dim, rays.into_iter().map(LatticeVector).collect(), cones)?;
    Ok(match name {
        Some(n) => fan.with_name(n),
        None => fan,
    })
}

/// Serializes a fan in the document format, one line per field.
pub fn to_document(fan: &Fan) -> String {
    let rows = |rows: Vec<String>| format!("[{}]", rows.join(", "));
    let ints = |xs: Vec<String>| format!("[{}]", xs.join(", "));
    let rays = rows(fan.rays().iter().map(|r| ints(r.coords().iter().map(i64::to_string).collect())).collect());
    let cones = rows(fan.max_cones().iter().map(|c| ints(c.iter().map(usize::to_string).collect())).collect());
    let mut out = String::from("{\n");
    if let Some(n) = fan.name() {
        out += &format!("  \"name\": {},\n", Value::String(n.to_string()));
    }
    out += &format!("  \"dim\": {},\n  \"rays\": {rays},\n  \"max_cones\": {cones}\n}}\n", fan.dim());
    out
}

/// Bundled fans as (name, document), in a fixed order.
pub const CORPUS: [(&str, &str); 10] = [
    ("P1", include_str!("../corpus/p1.json")),
    ("P2", include_str!("../corpus/p2.json")),
    ("P3", include_str!("../corpus/p3.json")),
    ("P1xP1", include_str!("../corpus/p1xp1.json")),
    ("F0", include_str!("../corpus/f0.json")),
    ("F1", include_str!("../corpus/f1.json")),
    ("F2", include_str!("../corpus/f2.json")),
    ("F3", include_str!("../corpus/f3.json")),
    ("dP6", include_str!("../corpus/dp6.json")),
    ("blowup16", include_str!("../corpus/blowup16.json")),
];

pub fn corpus_fan(name: &str) -> Option<Fan> {
    CORPUS
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, doc)| parse_fan(doc).expect("bundled fans parse"))
}

pub fn corpus() -> Vec<Fan> {
    CORPUS.iter().map(|(_, doc)| parse_fan(doc).expect("bundled fans parse")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_round_trips() {
        for (name, doc) in CORPUS {
            let fan = parse_fan(doc).unwrap();
            assert_eq!(fan.name(), Some(name));
            assert!(fan.validate().unwrap().is_valid(), "{name}");
            assert_eq!(to_document(&fan), doc, "{name}");
            assert_eq!(parse_fan(&to_document(&fan)).unwrap(), fan);
        }
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = r#"{"dim": 2, "rays": [[2, 0], [0, 1]], "max_cones": [[0, 1]]}"#;
        assert!(matches!(parse_fan(bad), Err(Error::NotPrimitive { index: 0, gcd: 2, .. })));
        let bad = r#"{"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 7]]}"#;
        assert!(matches!(parse_fan(bad), Err(Error::RayIndexOutOfRange { index: 7, rays: 3, .. })));
        let bad = r#"{"dim": 2, "rays": [[1, 0], [1, 0]], "max_cones": [[0, 1]]}"#;
        assert!(matches!(parse_fan(bad), Err(Error::DuplicateRay { first: 0, second: 1 })));
        let bad = r#"{"dim": 2, "rays": [[1, 0], [0, "x"]], "max_cones": []}"#;
        assert_eq!(parse_fan(bad).unwrap_err(), schema("rays[1][1]", "expected an integer"));
        let bad = r#"{"dim": 2, "rays": [[1, 0]], "max_cones": [], "colour": 1}"#;
        assert_eq!(parse_fan(bad).unwrap_err(), schema("colour", "unknown field"));
        let bad = "{\n  \"dim\": 2,\n  \"rays\": [[1, 0]\n}";
        assert!(matches!(parse_fan(bad), Err(Error::Syntax { line: 4, .. })));
    }
}
