//! JSON readers and writers for the file formats the CLI speaks.
//!
//! Output is canonical: object keys sorted, pairs and monomials in their
//! canonical orders, no insignificant whitespace. Identical inputs therefore
//! produce byte-identical output.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::diagram::{Color, ColoredObject, Diagram, DiagramError, Endpoint, NormalForm};
use crate::matrix::{Rational, RationalMatrix};
use crate::quantize::{CobordismWord, FieldSet, QuantizeError};
use crate::represent::{DualityStructure, Event, RepresentError, Representation, Slice};
use crate::semiring::QElement;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Represent(#[from] RepresentError),
    #[error(transparent)]
    Quantize(#[from] QuantizeError),
}

fn format_err(what: &'static str, detail: impl Into<String>) -> JsonError {
    JsonError::Format {
        what,
        detail: detail.into(),
    }
}

fn colors_value(obj: &ColoredObject) -> Value {
    Value::Array(obj.colors().iter().map(|k| json!(k.0)).collect())
}

fn parse_colors(v: &Value, what: &'static str) -> Result<ColoredObject, JsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| format_err(what, "expected an array of colors"))?;
    let mut colors = Vec::with_capacity(arr.len());
    for x in arr {
        let n = x
            .as_u64()
            .ok_or_else(|| format_err(what, format!("color {x} is not a natural number")))?;
        let n = u32::try_from(n)
            .map_err(|_| format_err(what, format!("color {n} out of range")))?;
        colors.push(Color(n));
    }
    Ok(ColoredObject::new(colors))
}

fn loops_value(loops: &BTreeMap<Color, u64>) -> Value {
    let mut m = Map::new();
    for (k, n) in loops {
        m.insert(k.0.to_string(), json!(n));
    }
    Value::Object(m)
}

fn parse_loops(v: &Value) -> Result<BTreeMap<Color, u64>, JsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| format_err("loops", "expected an object"))?;
    let mut out = BTreeMap::new();
    for (k, n) in obj {
        let color: u32 = k
            .parse()
            .map_err(|_| format_err("loops", format!("bad color key {k:?}")))?;
        let count = n
            .as_u64()
            .ok_or_else(|| format_err("loops", format!("bad count {n} for color {k}")))?;
        out.insert(Color(color), count);
    }
    Ok(out)
}

fn parse_endpoint(s: &str) -> Result<Endpoint, JsonError> {
    let (head, tail) = s.split_at(1.min(s.len()));
    let index: usize = tail
        .parse()
        .map_err(|_| format_err("endpoint", format!("bad endpoint {s:?}")))?;
    match head {
        "d" => Ok(Endpoint::dom(index)),
        "c" => Ok(Endpoint::cod(index)),
        _ => Err(format_err("endpoint", format!("bad endpoint {s:?}"))),
    }
}

/// `{"dom":[…],"cod":[…],"pairs":[["d0","c1"],…],"loops":{"0":1}}`
pub fn diagram_to_value(d: &Diagram) -> Value {
    let pairs: Vec<Value> = d
        .pairs()
        .map(|(a, b)| json!([a.to_string(), b.to_string()]))
        .collect();
    let mut m = Map::new();
    m.insert("cod".into(), colors_value(d.cod()));
    m.insert("dom".into(), colors_value(d.dom()));
    m.insert("loops".into(), loops_value(d.loops()));
    m.insert("pairs".into(), Value::Array(pairs));
    Value::Object(m)
}

pub fn diagram_from_value(v: &Value) -> Result<Diagram, JsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| format_err("diagram", "expected an object"))?;
    let dom = parse_colors(
        obj.get("dom")
            .ok_or_else(|| format_err("diagram", "missing \"dom\""))?,
        "diagram",
    )?;
    let cod = parse_colors(
        obj.get("cod")
            .ok_or_else(|| format_err("diagram", "missing \"cod\""))?,
        "diagram",
    )?;
    let pairs_v = obj
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| format_err("diagram", "missing or malformed \"pairs\""))?;
    let mut pairs = Vec::with_capacity(pairs_v.len());
    for p in pairs_v {
        let pa = p
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| format_err("diagram", "each pair must be a two-element array"))?;
        let a = parse_endpoint(
            pa[0]
                .as_str()
                .ok_or_else(|| format_err("diagram", "endpoints must be strings"))?,
        )?;
        let b = parse_endpoint(
            pa[1]
                .as_str()
                .ok_or_else(|| format_err("diagram", "endpoints must be strings"))?,
        )?;
        pairs.push((a, b));
    }
    let loops = match obj.get("loops") {
        Some(v) => parse_loops(v)?,
        None => BTreeMap::new(),
    };
    Ok(Diagram::new(dom, cod, pairs, loops)?)
}

pub fn diagram_to_string(d: &Diagram) -> String {
    diagram_to_value(d).to_string()
}

pub fn diagram_from_str(s: &str) -> Result<Diagram, JsonError> {
    diagram_from_value(&serde_json::from_str(s)?)
}

fn counts_value(m: &BTreeMap<Color, u64>) -> Value {
    loops_value(m)
}

pub fn normal_form_to_value(nf: &NormalForm) -> Value {
    let mut m = Map::new();
    m.insert("alpha".into(), json!(nf.alpha));
    m.insert("beta".into(), json!(nf.beta));
    m.insert("caps".into(), counts_value(&nf.caps));
    m.insert("cups".into(), counts_value(&nf.cups));
    m.insert("loops".into(), counts_value(&nf.loops));
    m.insert("through".into(), counts_value(&nf.through));
    Value::Object(m)
}

fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(v: &Value) -> Result<Rational, JsonError> {
    if let Some(n) = v.as_i64() {
        return Ok(Rational::from(BigInt::from(n)));
    }
    let s = v
        .as_str()
        .ok_or_else(|| format_err("rational", format!("expected \"p/q\" or integer, got {v}")))?;
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s.trim())
                .map_err(|_| format_err("rational", format!("bad integer {s:?}")))?;
            Ok(Rational::from(n))
        }
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim())
                .map_err(|_| format_err("rational", format!("bad numerator in {s:?}")))?;
            let q = BigInt::from_str(q.trim())
                .map_err(|_| format_err("rational", format!("bad denominator in {s:?}")))?;
            if q == BigInt::from(0) {
                return Err(format_err("rational", format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

pub fn matrix_to_value(m: &RationalMatrix) -> Value {
    let entries: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                (0..m.cols())
                    .map(|j| Value::String(rational_to_string(m.get(i, j))))
                    .collect(),
            )
        })
        .collect();
    let mut o = Map::new();
    o.insert("cols".into(), json!(m.cols()));
    o.insert("entries".into(), Value::Array(entries));
    o.insert("rows".into(), json!(m.rows()));
    Value::Object(o)
}

/// `{"colors":{"<k>":{"dim":d,"e":[[…]]}}}`; the unit is always derived.
pub fn representation_from_value(v: &Value) -> Result<Representation, JsonError> {
    let colors = v
        .get("colors")
        .and_then(Value::as_object)
        .ok_or_else(|| format_err("representation", "missing \"colors\" object"))?;
    let mut rep = Representation::new();
    for (k, spec) in colors {
        let color: u32 = k
            .parse()
            .map_err(|_| format_err("representation", format!("bad color key {k:?}")))?;
        let rows_v = spec
            .get("e")
            .and_then(Value::as_array)
            .ok_or_else(|| format_err("representation", format!("color {k}: missing \"e\"")))?;
        let mut rows = Vec::with_capacity(rows_v.len());
        for row in rows_v {
            let row = row.as_array().ok_or_else(|| {
                format_err("representation", format!("color {k}: \"e\" rows must be arrays"))
            })?;
            rows.push(
                row.iter()
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        let x = RationalMatrix::from_rows(rows)
            .map_err(|e| format_err("representation", format!("color {k}: {e}")))?;
        if let Some(dim) = spec.get("dim").and_then(Value::as_u64) {
            if dim as usize != x.rows() {
                return Err(format_err(
                    "representation",
                    format!("color {k}: declared dim {dim} but matrix is {}x{}", x.rows(), x.cols()),
                ));
            }
        }
        rep.insert(Color(color), DualityStructure::from_matrix(x)?);
    }
    Ok(rep)
}

pub fn representation_from_str(s: &str) -> Result<Representation, JsonError> {
    representation_from_value(&serde_json::from_str(s)?)
}

/// Serialize a completion element as a canonical list of components.
pub fn qelement_to_value(q: &QElement) -> Value {
    let mut items = Vec::new();
    for (sig, key, series) in q.entries() {
        let monomials: Vec<Value> = series
            .support()
            .map(|m| {
                let mut o = Map::new();
                for (k, e) in m.exponents() {
                    o.insert(k.0.to_string(), json!(e));
                }
                Value::Object(o)
            })
            .collect();
        let mut o = Map::new();
        o.insert("cod".into(), colors_value(&sig.cod));
        o.insert("dom".into(), colors_value(&sig.dom));
        o.insert("key".into(), diagram_to_value(key));
        o.insert("monomials".into(), Value::Array(monomials));
        items.push(Value::Object(o));
    }
    Value::Array(items)
}

fn parse_slice(v: &Value) -> Result<Slice, JsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| format_err("slice", "expected an object"))?;
    let event = obj
        .get("event")
        .and_then(Value::as_str)
        .ok_or_else(|| format_err("slice", "missing \"event\""))?;
    let pos = obj.get("pos").and_then(Value::as_u64).unwrap_or(0) as usize;
    let colors: Vec<u32> = match obj.get("colors") {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .ok_or_else(|| format_err("slice", "\"colors\" must be an array"))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .and_then(|n| u32::try_from(n).ok())
                    .ok_or_else(|| format_err("slice", format!("bad color {x}")))
            })
            .collect::<Result<_, _>>()?,
    };
    let need = |n: usize| -> Result<(), JsonError> {
        if colors.len() != n {
            return Err(format_err(
                "slice",
                format!("event {event:?} needs {n} colors, got {}", colors.len()),
            ));
        }
        Ok(())
    };
    let event = match event {
        "id" => Event::Id,
        "braid" => {
            need(2)?;
            Event::Braid(Color(colors[0]), Color(colors[1]))
        }
        "unit" => {
            need(1)?;
            Event::Unit(Color(colors[0]))
        }
        "counit" => {
            need(1)?;
            Event::Counit(Color(colors[0]))
        }
        other => return Err(format_err("slice", format!("unknown event {other:?}"))),
    };
    Ok(Slice { event, pos })
}

/// `{"in":[…],"out":[…],"fields":[[slice…]…]}`
pub fn field_set_from_value(v: &Value) -> Result<FieldSet, JsonError> {
    let in_boundary = parse_colors(
        v.get("in")
            .ok_or_else(|| format_err("field set", "missing \"in\""))?,
        "field set",
    )?;
    let out_boundary = parse_colors(
        v.get("out")
            .ok_or_else(|| format_err("field set", "missing \"out\""))?,
        "field set",
    )?;
    let fields_v = v
        .get("fields")
        .and_then(Value::as_array)
        .ok_or_else(|| format_err("field set", "missing or malformed \"fields\""))?;
    let mut fields = Vec::with_capacity(fields_v.len());
    for fv in fields_v {
        let slices_v = fv
            .as_array()
            .ok_or_else(|| format_err("field set", "each field must be an array of slices"))?;
        let slices = slices_v
            .iter()
            .map(parse_slice)
            .collect::<Result<Vec<_>, _>>()?;
        fields.push(CobordismWord::new(
            in_boundary.clone(),
            out_boundary.clone(),
            slices,
        )?);
    }
    Ok(FieldSet::new(in_boundary, out_boundary, fields)?)
}

pub fn field_set_from_str(s: &str) -> Result<FieldSet, JsonError> {
    field_set_from_value(&serde_json::from_str(s)?)
}
