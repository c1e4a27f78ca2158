//! JSON encoding of the library's types.
//!
//! Every exact quantity travels as a rational string ("p/q" or "p"); a bare
//! JSON number in such a position is rejected so rounded data can never
//! enter a decision. Floats appear only in output fields named euclid, and
//! are recomputed from the exact data when a document is read back. Object
//! keys serialize in sorted order and list entries in canonical order, so
//! output is byte-deterministic.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::certify::Certificate;
use crate::exactnum::{format_rational, parse_rational, to_f64, RVector, Rational};
use crate::frames::{measurement_basis, Frame};
use crate::polytope::{Body, Polytope, UnionBody};
use crate::valuations::{CoefficientTable, Evaluation, HadwigerValue, InvariantTable};
use crate::Error;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, Error> {
    v.as_object()
        .ok_or_else(|| parse_err(format!("{what} must be a JSON object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a [Value], Error> {
    v.as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| parse_err(format!("{what} must be a JSON array")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value, Error> {
    m.get(key)
        .ok_or_else(|| parse_err(format!("{what} is missing the \"{key}\" field")))
}

fn parse_dim(v: &Value, what: &str) -> Result<usize, Error> {
    v.as_u64()
        .map(|d| d as usize)
        .ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

/// Exact fields take rational strings only; numbers are refused outright.
fn parse_exact(v: &Value, what: &str) -> Result<Rational, Error> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => Err(parse_err(format!(
            "{what} must be an exact rational string, not a number"
        ))),
        _ => Err(parse_err(format!("{what} must be an exact rational string"))),
    }
}

fn parse_vector(v: &Value, what: &str) -> Result<RVector, Error> {
    let coords = as_array(v, what)?
        .iter()
        .map(|c| parse_exact(c, what))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.is_empty() {
        return Err(parse_err(format!("{what} must not be empty")));
    }
    Ok(RVector::new(coords))
}

pub fn vector_json(v: &RVector) -> Value {
    Value::Array(v.coords().iter().map(|c| json!(format_rational(c))).collect())
}

pub fn parse_polytope(v: &Value) -> Result<Polytope, Error> {
    let obj = as_object(v, "polytope")?;
    let dim = parse_dim(field(obj, "dim", "polytope")?, "\"dim\"")?;
    let vertices = as_array(field(obj, "vertices", "polytope")?, "\"vertices\"")?
        .iter()
        .map(|p| parse_vector(p, "vertex"))
        .collect::<Result<Vec<_>, _>>()?;
    Polytope::hull(dim, &vertices)
}

pub fn polytope_json(p: &Polytope) -> Value {
    json!({
        "dim": p.ambient_dim(),
        "vertices": Value::Array(p.vertices().iter().map(vector_json).collect()),
    })
}

/// A body is either a polytope object or {"pieces": [...]}; unions are
/// re-validated on the way in, so overlapping pieces never parse.
pub fn parse_body(v: &Value) -> Result<Body, Error> {
    let obj = as_object(v, "body")?;
    if let Some(pieces) = obj.get("pieces") {
        let pieces = as_array(pieces, "\"pieces\"")?
            .iter()
            .map(parse_polytope)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UnionBody::new(pieces)?.into())
    } else {
        Ok(parse_polytope(v)?.into())
    }
}

pub fn body_json(b: &Body) -> Value {
    match b.pieces() {
        [single] => polytope_json(single),
        many => json!({
            "pieces": Value::Array(many.iter().map(polytope_json).collect()),
        }),
    }
}

/// Bare direction-list form used inside tables and witness lists.
pub fn parse_dirs(ambient: usize, v: &Value, what: &str) -> Result<Frame, Error> {
    let dirs = as_array(v, what)?
        .iter()
        .map(|d| parse_vector(d, "direction"))
        .collect::<Result<Vec<_>, _>>()?;
    Frame::new(ambient, dirs)
}

pub fn dirs_json(f: &Frame) -> Value {
    Value::Array(f.dirs().iter().map(vector_json).collect())
}

/// Standalone frame form {"dirs": [...]}.
pub fn parse_frame(ambient: usize, v: &Value) -> Result<Frame, Error> {
    let obj = as_object(v, "frame")?;
    parse_dirs(ambient, field(obj, "dirs", "frame")?, "\"dirs\"")
}

pub fn frame_json(f: &Frame) -> Value {
    json!({ "dirs": dirs_json(f) })
}

fn canonical_key(ambient: usize, v: &Value, what: &str) -> Result<Frame, Error> {
    let frame = parse_dirs(ambient, v, what)?;
    if !frame.is_canonical() {
        return Err(parse_err(format!("{what} is not a canonical frame")));
    }
    Ok(frame)
}

pub fn parse_invariant_table(v: &Value) -> Result<InvariantTable, Error> {
    let obj = as_object(v, "invariant table")?;
    let n = parse_dim(field(obj, "n", "invariant table")?, "\"n\"")?;
    let mut entries = BTreeMap::new();
    for e in as_array(field(obj, "entries", "invariant table")?, "\"entries\"")? {
        let e = as_object(e, "table entry")?;
        let frame = canonical_key(n, field(e, "frame", "table entry")?, "entry frame")?;
        let coord = parse_exact(field(e, "coord", "table entry")?, "\"coord\"")?;
        if coord.is_zero() {
            return Err(parse_err("zero entries must be omitted, not stored"));
        }
        // gram and euclid are derived from the frame; stored copies are
        // ignored so a table can never carry inconsistent readings.
        let gram = measurement_basis(&frame).gram;
        let value = HadwigerValue {
            frame_class: frame.clone(),
            euclidean_approx: to_f64(&coord) * to_f64(&gram).sqrt(),
            coordinate_value: coord,
            gram,
        };
        if entries.insert(frame, value).is_some() {
            return Err(parse_err("duplicate frame key in invariant table"));
        }
    }
    Ok(InvariantTable::from_entries(n, entries))
}

pub fn invariant_table_json(t: &InvariantTable) -> Value {
    let entries: Vec<Value> = t
        .entries()
        .values()
        .map(|hv| {
            json!({
                "frame": dirs_json(&hv.frame_class),
                "coord": format_rational(&hv.coordinate_value),
                "gram": format_rational(&hv.gram),
                "euclid": hv.euclidean_approx,
            })
        })
        .collect();
    json!({ "n": t.ambient_dim(), "entries": entries })
}

pub fn parse_coefficient_table(v: &Value) -> Result<CoefficientTable, Error> {
    let obj = as_object(v, "coefficient table")?;
    let n = parse_dim(field(obj, "n", "coefficient table")?, "\"n\"")?;
    let coeffs = as_array(field(obj, "entries", "coefficient table")?, "\"entries\"")?
        .iter()
        .map(|e| {
            let e = as_object(e, "table entry")?;
            let frame = canonical_key(n, field(e, "frame", "table entry")?, "entry frame")?;
            let coeff = parse_exact(field(e, "coeff", "table entry")?, "\"coeff\"")?;
            Ok((frame, coeff))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    CoefficientTable::new(n, coeffs)
}

pub fn coefficient_table_json(t: &CoefficientTable) -> Value {
    let entries: Vec<Value> = t
        .entries()
        .iter()
        .map(|(frame, coeff)| {
            json!({
                "frame": dirs_json(frame),
                "coeff": format_rational(coeff),
            })
        })
        .collect();
    json!({ "n": t.ambient_dim(), "entries": entries })
}

pub fn parse_certificate(v: &Value) -> Result<Certificate, Error> {
    let obj = as_object(v, "certificate")?;
    let pieces = as_array(field(obj, "pieces", "certificate")?, "\"pieces\"")?
        .iter()
        .map(parse_polytope)
        .collect::<Result<Vec<_>, _>>()?;
    let translations = as_array(field(obj, "translations", "certificate")?, "\"translations\"")?
        .iter()
        .map(|t| parse_vector(t, "translation"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Certificate { pieces, translations })
}

pub fn certificate_json(c: &Certificate) -> Value {
    json!({
        "pieces": Value::Array(c.pieces.iter().map(polytope_json).collect()),
        "translations": Value::Array(c.translations.iter().map(vector_json).collect()),
    })
}

pub fn evaluation_json(e: &Evaluation) -> Value {
    let per_frame: Vec<Value> = e
        .per_frame
        .iter()
        .map(|(frame, value)| {
            json!({
                "frame": dirs_json(frame),
                "value": format_rational(value),
            })
        })
        .collect();
    json!({ "per_frame": per_frame, "euclid": e.euclidean_total })
}
