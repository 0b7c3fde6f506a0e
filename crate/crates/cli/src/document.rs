//! The JSON points document and its field-level diagnostics.

use std::fmt;

use cb_core::exact::{format_rat, parse_rat};
use cb_core::{Config8, ProjPoint, Rat};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Eight homogeneous coordinate triples as exact-rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsDocument {
    pub points: Vec<[String; 3]>,
}

impl PointsDocument {
    pub fn from_config(c: &Config8) -> Self {
        PointsDocument {
            points: c
                .points()
                .iter()
                .map(|p| p.coords().map(format_rat))
                .collect(),
        }
    }

    pub fn to_config(&self) -> Result<Config8, DocumentError> {
        let value = serde_json::to_value(self).expect("strings serialize");
        config_from_value(&value)
    }
}

/// A validation failure tied to a JSON path such as `points[3][1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DocumentError {
    pub field: String,
    pub message: String,
}

impl DocumentError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for DocumentError {}

/// A coordinate given as `"n"`, `"p/q"` or a JSON number. Floats are taken
/// as the exact dyadic rational they encode.
fn coordinate(v: &Value, field: &str) -> Result<Rat, DocumentError> {
    match v {
        Value::String(s) => {
            parse_rat(s).ok_or_else(|| DocumentError::new(field, format!("{s:?} is not an integer or p/q rational")))
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Rat::from_integer(u.into()))
            } else {
                let f = n.as_f64().expect("JSON numbers are finite");
                Ratio::from_float(f).ok_or_else(|| DocumentError::new(field, "number is not finite"))
            }
        }
        other => Err(DocumentError::new(
            field,
            format!("expected a string or number, found {}", kind(other)),
        )),
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

/// Validates the `points` member of a request object.
pub fn config_from_value(doc: &Value) -> Result<Config8, DocumentError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| DocumentError::new("$", format!("expected an object, found {}", kind(doc))))?;
    let points = obj
        .get("points")
        .ok_or_else(|| DocumentError::new("points", "missing"))?;
    let arr = points
        .as_array()
        .ok_or_else(|| DocumentError::new("points", format!("expected an array, found {}", kind(points))))?;
    if arr.len() != 8 {
        return Err(DocumentError::new(
            "points",
            format!("expected 8 points, found {}", arr.len()),
        ));
    }
    let mut out = Vec::with_capacity(8);
    for (i, p) in arr.iter().enumerate() {
        let field = format!("points[{i}]");
        let triple = p
            .as_array()
            .ok_or_else(|| DocumentError::new(&field, format!("expected an array, found {}", kind(p))))?;
        if triple.len() != 3 {
            return Err(DocumentError::new(
                &field,
                format!("expected 3 coordinates, found {}", triple.len()),
            ));
        }
        let mut coords: [Rat; 3] = Default::default();
        for (k, v) in triple.iter().enumerate() {
            coords[k] = coordinate(v, &format!("points[{i}][{k}]"))?;
        }
        let point = ProjPoint::from_vec(coords)
            .map_err(|_| DocumentError::new(&field, "all coordinates are zero"))?;
        out.push(point);
    }
    Ok(Config8::new(out.try_into().expect("eight points")))
}

pub fn parse_document(text: &str) -> Result<Config8, DocumentError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| DocumentError::new("$", format!("invalid JSON: {e}")))?;
    config_from_value(&value)
}
