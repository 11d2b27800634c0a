//! JSON interchange for metrics, graphs and point sets.
//!
//! Reals are written with 17 significant digits so every `f64` survives a
//! round trip; rationals are lowest-terms strings `"p/q"` (or `"k"`).
//!
//! ```text
//! metric:    {"kind": "real" | "rational", "n": N, "d": [[...], ...]}
//! graph:     {"n": N, "edges": [[i, j], ...]}
//! point set: {"p": x, "points": [[...], ...]}
//! ```

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use crate::metric::{Graph, MetricError, MetricSpace, PointSet};
use crate::scalar::{Rational, Scalar, ScalarKind};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn shape(msg: impl Into<String>) -> FormatError {
    FormatError::Shape(msg.into())
}

/// A finite `f64` as a JSON number with 17 significant digits; `null`
/// for NaN and infinities.
pub fn real_value(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(text.parse::<Number>().expect("formatted float is a JSON number"))
}

/// A list of reals.
pub fn real_array(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| real_value(x)).collect())
}

pub fn index_array(xs: &[usize]) -> Value {
    Value::Array(xs.iter().map(|&x| json!(x)).collect())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, FormatError> {
    obj.get(key).ok_or_else(|| shape(format!("missing field {key:?}")))
}

fn as_object(v: &Value) -> Result<&Map<String, Value>, FormatError> {
    v.as_object().ok_or_else(|| shape("expected a JSON object"))
}

fn as_usize(v: &Value, what: &str) -> Result<usize, FormatError> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| shape(format!("{what} must be a non-negative integer")))
}

fn as_real(v: &Value, what: &str) -> Result<f64, FormatError> {
    f64::from_json(v).map_err(|e| shape(format!("{what}: {e}")))
}

/// A metric of either scalar kind, as read from JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMetric {
    Real(MetricSpace<f64>),
    Rational(MetricSpace<Rational>),
}

impl AnyMetric {
    pub fn len(&self) -> usize {
        match self {
            AnyMetric::Real(m) => m.len(),
            AnyMetric::Rational(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyMetric::Real(_) => ScalarKind::Real,
            AnyMetric::Rational(_) => ScalarKind::Rational,
        }
    }

    pub fn to_real(&self) -> MetricSpace<f64> {
        match self {
            AnyMetric::Real(m) => m.clone(),
            AnyMetric::Rational(m) => m.to_real(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyMetric::Real(m) => metric_to_json(m),
            AnyMetric::Rational(m) => metric_to_json(m),
        }
    }
}

pub fn metric_to_json<S: Scalar>(m: &MetricSpace<S>) -> Value {
    let d: Vec<Value> = m
        .rows()
        .iter()
        .map(|row| Value::Array(row.iter().map(S::to_json).collect()))
        .collect();
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(S::KIND.as_str()));
    obj.insert("n".into(), json!(m.len()));
    obj.insert("d".into(), Value::Array(d));
    if let Some(label) = m.label() {
        obj.insert("label".into(), json!(label));
    }
    Value::Object(obj)
}

fn parse_rows<S: Scalar>(d: &Value, n: usize) -> Result<Vec<Vec<S>>, FormatError> {
    let rows = d.as_array().ok_or_else(|| shape("\"d\" must be an array of rows"))?;
    if rows.len() != n {
        return Err(shape(format!("\"n\" is {n} but \"d\" has {} rows", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row.as_array().ok_or_else(|| shape(format!("row {i} is not an array")))?;
            row.iter()
                .enumerate()
                .map(|(j, x)| S::from_json(x).map_err(|e| shape(format!("d[{i}][{j}]: {e}"))))
                .collect()
        })
        .collect()
}

/// Parses and validates a metric of the declared kind.
pub fn metric_from_json(v: &Value) -> Result<AnyMetric, FormatError> {
    let obj = as_object(v)?;
    let n = as_usize(field(obj, "n")?, "\"n\"")?;
    let d = field(obj, "d")?;
    let label = obj.get("label").and_then(Value::as_str).map(str::to_owned);
    let kind = field(obj, "kind")?.as_str().unwrap_or_default();
    let mut m = match kind {
        "real" => AnyMetric::Real(MetricSpace::validate(parse_rows(d, n)?)?),
        "rational" => AnyMetric::Rational(MetricSpace::validate(parse_rows(d, n)?)?),
        other => return Err(shape(format!("unknown metric kind {other:?}"))),
    };
    if let Some(label) = label {
        m = match m {
            AnyMetric::Real(x) => AnyMetric::Real(x.with_label(label)),
            AnyMetric::Rational(x) => AnyMetric::Rational(x.with_label(label)),
        };
    }
    Ok(m)
}

pub fn graph_to_json(g: &Graph) -> Value {
    let edges: Vec<Value> = g.edges().iter().map(|&(a, b)| json!([a, b])).collect();
    json!({ "n": g.vertex_count(), "edges": edges })
}

pub fn graph_from_json(v: &Value) -> Result<Graph, FormatError> {
    let obj = as_object(v)?;
    let n = as_usize(field(obj, "n")?, "\"n\"")?;
    let edges = field(obj, "edges")?
        .as_array()
        .ok_or_else(|| shape("\"edges\" must be an array"))?
        .iter()
        .map(|e| match e.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((as_usize(a, "edge endpoint")?, as_usize(b, "edge endpoint")?)),
            _ => Err(shape("each edge must be a pair [i, j]")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Graph::new(n, edges)?)
}

pub fn pointset_to_json(ps: &PointSet) -> Value {
    let points: Vec<Value> = ps.points().iter().map(|v| real_array(v)).collect();
    json!({ "p": real_value(ps.p()), "points": points })
}

pub fn pointset_from_json(v: &Value) -> Result<PointSet, FormatError> {
    let obj = as_object(v)?;
    let p = as_real(field(obj, "p")?, "\"p\"")?;
    let points = field(obj, "points")?
        .as_array()
        .ok_or_else(|| shape("\"points\" must be an array"))?
        .iter()
        .enumerate()
        .map(|(i, pt)| {
            pt.as_array()
                .ok_or_else(|| shape(format!("point {i} is not an array")))?
                .iter()
                .map(|x| as_real(x, &format!("point {i}")))
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PointSet::new(points, p)?)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn read_json(path: &Path) -> Result<Value, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// Writes through a temporary file in the target directory, then renames
/// it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), FormatError> {
    let io = |source| FormatError::Io { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
