//! Shared helpers for the JSON interchange formats.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::rational::{parse_q, Q};

/// Parses JSON text, reporting syntax errors at their byte offset.
pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let offset = text.split_inclusive('\n').take(e.line().saturating_sub(1)).map(str::len).sum::<usize>()
            + e.column().saturating_sub(1);
        Error::parse(offset, e.to_string())
    })
}

pub fn structure(msg: impl Into<String>) -> Error {
    Error::parse(0, msg)
}

pub fn field<'a>(v: &'a Value, key: &str, ctx: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| structure(format!("{ctx}: missing field `{key}`")))
}

pub fn as_array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| structure(format!("{ctx}: expected an array")))
}

pub fn as_i64(v: &Value, ctx: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| structure(format!("{ctx}: expected an integer")))
}

pub fn as_usize(v: &Value, ctx: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| structure(format!("{ctx}: expected a nonnegative integer")))
}

/// A coefficient written as `"p/q"`, `"p"` or a JSON integer.
pub fn coefficient(v: &Value, ctx: &str) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s).map_err(|_| structure(format!("{ctx}: invalid rational `{s}`"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Q::from_integer(i.into()))
            .ok_or_else(|| structure(format!("{ctx}: non-integer numbers must be written as \"p/q\" strings"))),
        _ => Err(structure(format!("{ctx}: expected a rational"))),
    }
}

pub fn coefficient_to_json(c: &Q) -> Value {
    Value::String(c.to_string())
}

/// `{"dims": {"-1": 2, "0": 3}}`.
pub fn space_from_json(v: &Value, ctx: &str) -> Result<GradedSpace> {
    let dims = field(v, "dims", ctx)?
        .as_object()
        .ok_or_else(|| structure(format!("{ctx}: `dims` must be an object")))?;
    let mut out = Vec::new();
    for (k, n) in dims {
        let deg: i64 = k.trim().parse().map_err(|_| structure(format!("{ctx}: degree key `{k}` is not an integer")))?;
        out.push((deg, as_usize(n, ctx)?));
    }
    Ok(GradedSpace::new(out))
}

pub fn space_to_json(s: &GradedSpace) -> Value {
    let dims: Map<String, Value> = s.dims().iter().map(|(d, n)| (d.to_string(), json!(n))).collect();
    json!({ "dims": dims })
}
