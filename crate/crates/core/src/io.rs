//! JSON wire formats. Rationals travel as `"p/q"` strings (bare integers
//! are accepted on input); floating-point numbers are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::cumulant::{CumulantSpec, Labels, MomentFunction};
use crate::error::{Error, Result};
use crate::lattice::LatticeFamily;
use crate::matrix::Matrix;
use crate::partition::Partition;
use crate::scalar::{format_rational, parse_rational};
use crate::wick::PairWeight;
use crate::Rational;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => Err(parse_err(format!("'{n}' is not an integer; write rationals as \"p/q\""))),
        },
        other => Err(parse_err(format!("expected a rational, found {other}"))),
    }
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn vector_from_json(v: &Value) -> Result<Vec<Rational>> {
    v.as_array().ok_or_else(|| parse_err("expected an array of rationals"))?.iter().map(rational_from_json).collect()
}

pub fn vector_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_to_json).collect())
}

/// Comma-separated rationals, e.g. `3/5,4/5`.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|s| parse_rational(s.trim())).collect()
}

/// `{"rows":2,"cols":2,"entries":[["3/5","4/5"],["-4/5","3/5"]]}`, or a bare
/// array of rows.
pub fn matrix_from_json(v: &Value) -> Result<Matrix<Rational>> {
    let (rows_v, dims) = match v {
        Value::Array(_) => (v, None),
        Value::Object(o) => {
            let entries = o.get("entries").ok_or_else(|| parse_err("matrix needs an 'entries' field"))?;
            let dim = |k: &str| o.get(k).map(|d| d.as_u64().ok_or_else(|| parse_err(format!("'{k}' must be a count"))));
            let dims = match (dim("rows"), dim("cols")) {
                (Some(r), Some(c)) => Some((r? as usize, c? as usize)),
                (None, None) => None,
                _ => return Err(parse_err("matrix needs both 'rows' and 'cols' or neither")),
            };
            (entries, dims)
        }
        _ => return Err(parse_err("expected a matrix object")),
    };
    let rows = rows_v
        .as_array()
        .ok_or_else(|| parse_err("matrix entries must be an array of rows"))?
        .iter()
        .map(vector_from_json)
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_rows(rows)?;
    if let Some((r, c)) = dims {
        if (r, c) != (m.rows(), m.cols()) {
            return Err(Error::SizeMismatch(format!("declared {r}x{c}, entries are {}x{}", m.rows(), m.cols())));
        }
    }
    Ok(m)
}

pub fn matrix_to_json(m: &Matrix<Rational>) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.to_rows().iter().map(|r| vector_to_json(r)).collect::<Vec<_>>(),
    })
}

/// `classical`, `free` or `boolean` for the three calculi.
pub fn calculus_name(family: LatticeFamily) -> &'static str {
    match family {
        LatticeFamily::All => "classical",
        LatticeFamily::NonCrossing => "free",
        LatticeFamily::Interval => "boolean",
        other => other.name(),
    }
}

fn args_of(entry: &Map<String, Value>) -> Result<Vec<String>> {
    entry
        .get("args")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("entry needs an 'args' array"))?
        .iter()
        .map(|a| a.as_str().map(str::to_string).ok_or_else(|| parse_err("labels must be strings")))
        .collect()
}

fn entries_of(v: &Value) -> Result<Vec<(Vec<String>, Rational)>> {
    let list = v.get("entries").and_then(Value::as_array).ok_or_else(|| parse_err("expected an 'entries' array"))?;
    list.iter()
        .map(|e| {
            let o = e.as_object().ok_or_else(|| parse_err("entries must be objects"))?;
            let value = rational_from_json(o.get("value").ok_or_else(|| parse_err("entry needs a 'value'"))?)?;
            Ok((args_of(o)?, value))
        })
        .collect()
}

fn labels_of(v: &Value, entries: &[(Vec<String>, Rational)]) -> Result<Labels> {
    let mut names: Vec<String> = entries.iter().flat_map(|(a, _)| a.iter().cloned()).collect();
    if let Some(extra) = v.get("labels") {
        let extra = extra.as_array().ok_or_else(|| parse_err("'labels' must be an array"))?;
        for l in extra {
            names.push(l.as_str().ok_or_else(|| parse_err("labels must be strings"))?.to_string());
        }
    }
    Ok(Labels::new(names))
}

fn family_of(v: &Value) -> Result<LatticeFamily> {
    v.get("family").and_then(Value::as_str).ok_or_else(|| parse_err("expected a 'family' string"))?.parse()
}

/// `{"family":"classical","entries":[{"args":["X","X"],"value":"1/1"}]}` with
/// optional `labels`, `independent` and `nondegenerate` fields.
pub fn spec_from_json(v: &Value) -> Result<CumulantSpec<Rational>> {
    let family = family_of(v)?;
    let entries = entries_of(v)?;
    let mut spec = CumulantSpec::new(family, labels_of(v, &entries)?)?;
    for (args, value) in entries {
        if args.is_empty() {
            return Err(Error::InvalidSpec("cumulant tuples need at least one label".into()));
        }
        spec.set(&args, value)?;
    }
    if v.get("independent").and_then(Value::as_bool) == Some(true) {
        spec = spec.declare_independent()?;
    }
    if v.get("nondegenerate").and_then(Value::as_bool) == Some(true) {
        spec = spec.declare_nondegenerate()?;
    }
    Ok(spec)
}

pub fn spec_to_json(spec: &CumulantSpec<Rational>) -> Value {
    let entries: Vec<Value> = spec.entries().map(|(args, v)| json!({"args": args, "value": rational_to_json(v)})).collect();
    json!({
        "family": calculus_name(spec.family()),
        "labels": spec.labels().names(),
        "entries": entries,
    })
}

/// `{"max_degree":4,"entries":[{"args":["X"],"value":"0/1"}, ...]}`; every
/// tuple up to the max degree must be present.
pub fn moments_from_json(v: &Value) -> Result<MomentFunction<Rational>> {
    let entries = entries_of(v)?;
    let max_degree = match v.get("max_degree") {
        Some(d) => d.as_u64().ok_or_else(|| parse_err("'max_degree' must be a count"))? as usize,
        None => entries.iter().map(|(a, _)| a.len()).max().unwrap_or(0),
    };
    let mut m = MomentFunction::empty(labels_of(v, &entries)?, max_degree);
    for (args, value) in entries {
        m.set(&args, value)?;
    }
    m.validate()?;
    Ok(m)
}

pub fn moments_to_json(m: &MomentFunction<Rational>) -> Value {
    let entries: Vec<Value> = m.entries().map(|(args, v)| json!({"args": args, "value": rational_to_json(v)})).collect();
    json!({"labels": m.labels().names(), "max_degree": m.max_degree(), "entries": entries})
}

/// Object mapping partition strings such as `"1,3|2,4"` to rationals.
pub fn partition_table_from_json(v: &Value) -> Result<BTreeMap<Partition, Rational>> {
    let o = v.as_object().ok_or_else(|| parse_err("expected an object keyed by partitions"))?;
    o.iter().map(|(k, val)| Ok((k.parse::<Partition>()?, rational_from_json(val)?))).collect()
}

pub fn custom_weight_from_json(v: &Value) -> Result<PairWeight<Rational>> {
    let table = partition_table_from_json(v)?;
    if let Some(p) = table.keys().find(|p| !p.is_pair()) {
        return Err(Error::NotPairPartition(p.to_string()));
    }
    Ok(PairWeight::Custom(table))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_err(format!("malformed JSON in {}: {e}", path.display())))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("malformed JSON: {e}")))
}

/// `classical`, `free`, `boolean`, `q:<p/q>` or `custom:<path.json>`.
pub fn parse_weight(text: &str) -> Result<PairWeight<Rational>> {
    let text = text.trim();
    if let Some(q) = text.strip_prefix("q:") {
        return Ok(PairWeight::QDeformed(parse_rational(q)?));
    }
    if let Some(path) = text.strip_prefix("custom:") {
        return custom_weight_from_json(&read_json(Path::new(path))?);
    }
    match text {
        "classical" => Ok(PairWeight::Classical),
        "free" => Ok(PairWeight::Free),
        "boolean" => Ok(PairWeight::Boolean),
        other => Err(parse_err(format!("unknown weight '{other}'"))),
    }
}

/// Comma-separated labels, e.g. `X,Y,X,Y`.
pub fn parse_word(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}
