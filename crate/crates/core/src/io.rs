//! JSON file formats and the canonical writer.
//!
//! Canonical JSON has sorted object keys, two-space indentation, integers
//! printed as integers and every float printed with 17 significant digits
//! (`{:.16e}`), so `load ∘ save` is the identity on canonical files.
//!
//! Filter paths are listed in *application order*: `["a35", "a51"]` is the
//! path that first follows `a35`, then `a51` (written `a51·a35` in
//! right-to-left notation).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path as FsPath;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decomposition::{FourierDecomposition, IntervalBarcode, SummandList};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::path_algebra::FilterElement;
use crate::quiver::{Arrow, Path, Quiver};
use crate::representation::{QuiverSignal, Representation};
use crate::tda::{FilteredComplex, Simplex};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QuiverFile {
    pub nodes: Vec<String>,
    pub arrows: Vec<ArrowFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ArrowFile {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub data: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RepresentationFile {
    pub dims: BTreeMap<String, usize>,
    pub maps: BTreeMap<String, MatrixFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SignalFile {
    pub blocks: BTreeMap<String, Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub coeff: f64,
    /// Arrow ids in application order.
    pub path: Vec<String>,
    /// Node of a trivial path; required when `path` is empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FilterFile {
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimplexFile {
    pub verts: Vec<String>,
    pub level: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub simplices: Vec<SimplexFile>,
}

/// Parses JSON text, reporting the line, column and field path on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let parsed: std::result::Result<T, _> = serde_path_to_error::deserialize(&mut de);
    match parsed {
        Ok(v) => {
            de.end().map_err(|e| Error::Parse {
                location: format!("line {} column {}", e.line(), e.column()),
                message: e.to_string(),
            })?;
            Ok(v)
        }
        Err(e) => {
            let field = e.path().to_string();
            let inner = e.into_inner();
            Err(Error::Parse {
                location: format!("line {} column {} (field `{}`)", inner.line(), inner.column(), field),
                message: inner.to_string(),
            })
        }
    }
}

pub fn read_file(path: impl AsRef<FsPath>) -> Result<String> {
    let p = path.as_ref();
    std::fs::read_to_string(p).map_err(|e| Error::Parse {
        location: p.display().to_string(),
        message: e.to_string(),
    })
}

// ---- conversions ----------------------------------------------------------

pub fn quiver_from_file(f: &QuiverFile) -> Result<Quiver> {
    let arrows = f
        .arrows
        .iter()
        .map(|a| Arrow::new(a.id.clone(), a.tail.clone(), a.head.clone()))
        .collect();
    Quiver::new(f.nodes.clone(), arrows)
}

pub fn quiver_to_file(q: &Quiver) -> QuiverFile {
    QuiverFile {
        nodes: q.nodes().to_vec(),
        arrows: q
            .arrows()
            .iter()
            .map(|a| ArrowFile {
                id: a.id.clone(),
                tail: a.tail.clone(),
                head: a.head.clone(),
            })
            .collect(),
    }
}

pub fn matrix_from_file(m: &MatrixFile) -> Result<Matrix> {
    if m.data.len() != m.rows * m.cols {
        return Err(Error::Invalid(format!(
            "matrix declares {}x{} but holds {} entries",
            m.rows,
            m.cols,
            m.data.len()
        )));
    }
    Ok(Matrix::from_row_slice(m.rows, m.cols, &m.data))
}

pub fn matrix_to_file(m: &Matrix) -> MatrixFile {
    let mut data = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            data.push(m[(r, c)]);
        }
    }
    MatrixFile {
        rows: m.nrows(),
        cols: m.ncols(),
        data,
    }
}

pub fn representation_from_file(q: Arc<Quiver>, f: &RepresentationFile) -> Result<Representation> {
    let maps = f
        .maps
        .iter()
        .map(|(id, m)| {
            matrix_from_file(m)
                .map(|mat| (id.clone(), mat))
                .map_err(|e| Error::Invalid(format!("arrow `{id}`: {e}")))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Representation::from_named(q, &f.dims, &maps)
}

pub fn representation_to_file(rep: &Representation) -> RepresentationFile {
    let q = rep.quiver();
    RepresentationFile {
        dims: q.nodes().iter().cloned().zip(rep.dims().iter().copied()).collect(),
        maps: q
            .arrows()
            .iter()
            .zip(rep.maps())
            .map(|(a, m)| (a.id.clone(), matrix_to_file(m)))
            .collect(),
    }
}

pub fn signal_from_file(rep: &Representation, f: &SignalFile) -> Result<QuiverSignal> {
    QuiverSignal::from_named(rep, &f.blocks)
}

pub fn signal_to_file(rep: &Representation, x: &QuiverSignal) -> SignalFile {
    SignalFile {
        blocks: rep
            .quiver()
            .nodes()
            .iter()
            .cloned()
            .zip(x.blocks().iter().map(|b| b.iter().copied().collect()))
            .collect(),
    }
}

pub fn path_from_term(q: &Quiver, path: &[String], base: Option<&str>) -> Result<Path> {
    if path.is_empty() {
        let base = base.ok_or_else(|| Error::Invalid("trivial path needs a `base` node".into()))?;
        q.trivial_at(base)
    } else {
        let p = q.path(path)?;
        if let Some(b) = base {
            let idx = q.node_index(b).ok_or_else(|| Error::UnknownNode(b.to_string()))?;
            if idx != p.tail() {
                return Err(Error::Invalid(format!("`base` {b} is not the tail of the path")));
            }
        }
        Ok(p)
    }
}

pub fn filter_from_file(q: &Quiver, f: &FilterFile) -> Result<FilterElement> {
    let terms = f
        .terms
        .iter()
        .map(|t| path_from_term(q, &t.path, t.base.as_deref()).map(|p| (t.coeff, p)))
        .collect::<Result<Vec<_>>>()?;
    FilterElement::from_terms(q, terms)
}

pub fn filter_to_file(q: &Quiver, c: &FilterElement) -> FilterFile {
    FilterFile {
        terms: c
            .terms()
            .map(|(p, coeff)| TermFile {
                coeff,
                path: q.arrow_ids(p).into_iter().map(String::from).collect(),
                base: p.is_trivial().then(|| q.nodes()[p.tail()].clone()),
            })
            .collect(),
    }
}

pub fn complex_from_file(f: &ComplexFile) -> Result<FilteredComplex> {
    let simplices = f
        .simplices
        .iter()
        .map(|s| Simplex::new(s.verts.clone(), s.level))
        .collect();
    FilteredComplex::with_steps(simplices, f.n)
}

pub fn complex_to_file(c: &FilteredComplex) -> ComplexFile {
    ComplexFile {
        n: Some(c.steps()),
        simplices: c
            .simplices()
            .iter()
            .map(|s| SimplexFile {
                verts: s.verts.clone(),
                level: s.level,
            })
            .collect(),
    }
}

// ---- workspace -------------------------------------------------------------

/// Artifacts loaded for one invocation. Loading is ordered: a representation
/// needs the quiver, a signal needs the first representation, a filter needs
/// the quiver; every cross-reference is checked as it arrives.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub quiver: Option<Arc<Quiver>>,
    pub representations: Vec<Representation>,
    pub signals: Vec<QuiverSignal>,
    pub filters: Vec<FilterElement>,
    pub complexes: Vec<FilteredComplex>,
    pub seed: Option<u64>,
}

impl Workspace {
    pub fn with_seed(seed: Option<u64>) -> Self {
        Workspace {
            seed,
            ..Workspace::default()
        }
    }

    pub fn quiver(&self) -> Result<&Arc<Quiver>> {
        self.quiver.as_ref().ok_or_else(|| Error::Invalid("a quiver file is required (-q)".into()))
    }

    pub fn representation(&self) -> Result<&Representation> {
        self.representations
            .first()
            .ok_or_else(|| Error::Invalid("a representation file is required (-r)".into()))
    }

    pub fn load_quiver(&mut self, path: impl AsRef<FsPath>) -> Result<&Arc<Quiver>> {
        let f: QuiverFile = parse(&read_file(path)?)?;
        self.quiver = Some(Arc::new(quiver_from_file(&f)?));
        self.quiver()
    }

    pub fn load_representation(&mut self, path: impl AsRef<FsPath>) -> Result<&Representation> {
        let q = self.quiver()?.clone();
        let f: RepresentationFile = parse(&read_file(path)?)?;
        self.representations.push(representation_from_file(q, &f)?);
        Ok(self.representations.last().expect("just pushed"))
    }

    pub fn load_signal(&mut self, path: impl AsRef<FsPath>) -> Result<&QuiverSignal> {
        let f: SignalFile = parse(&read_file(path)?)?;
        let x = signal_from_file(self.representation()?, &f)?;
        self.signals.push(x);
        Ok(self.signals.last().expect("just pushed"))
    }

    pub fn load_filter(&mut self, path: impl AsRef<FsPath>) -> Result<&FilterElement> {
        let f: FilterFile = parse(&read_file(path)?)?;
        let c = filter_from_file(self.quiver()?, &f)?;
        self.filters.push(c);
        Ok(self.filters.last().expect("just pushed"))
    }

    pub fn load_complex(&mut self, path: impl AsRef<FsPath>) -> Result<&FilteredComplex> {
        let f: ComplexFile = parse(&read_file(path)?)?;
        self.complexes.push(complex_from_file(&f)?);
        Ok(self.complexes.last().expect("just pushed"))
    }

    /// Canonical text of every loaded artifact, in load order per kind.
    pub fn save(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        if let Some(q) = &self.quiver {
            out.push(to_canonical(&quiver_to_file(q))?);
            for rep in &self.representations {
                out.push(to_canonical(&representation_to_file(rep))?);
            }
            if let Ok(rep) = self.representation() {
                for x in &self.signals {
                    out.push(to_canonical(&signal_to_file(rep, x))?);
                }
            }
            for c in &self.filters {
                out.push(to_canonical(&filter_to_file(q, c))?);
            }
        }
        for c in &self.complexes {
            out.push(to_canonical(&complex_to_file(c))?);
        }
        Ok(out)
    }
}

// ---- result documents -----------------------------------------------------

pub fn barcode_value(bc: &IntervalBarcode) -> Value {
    let intervals: Vec<Value> = bc
        .multiplicities
        .iter()
        .map(|(&(a, b), &m)| serde_json::json!({"start": a, "end": b, "multiplicity": m}))
        .collect();
    serde_json::json!({"n": bc.n, "intervals": intervals})
}

pub fn path_value(q: &Quiver, p: &Path) -> Value {
    serde_json::json!({
        "path": q.arrow_ids(p),
        "tail": q.nodes()[p.tail()],
        "head": q.nodes()[p.head()],
        "length": p.len(),
    })
}

pub fn summands_value(list: &SummandList, end_dims: &[usize]) -> Value {
    let summands: Vec<Value> = list
        .summands
        .iter()
        .zip(end_dims)
        .map(|(s, &e)| {
            let q = s.rep.quiver();
            let basis: BTreeMap<String, MatrixFile> = q
                .nodes()
                .iter()
                .cloned()
                .zip(s.basis.iter().map(matrix_to_file))
                .collect();
            serde_json::json!({
                "representation": representation_to_file(&s.rep),
                "basis": basis,
                "unsplit": s.unsplit,
                "end_dim": e,
            })
        })
        .collect();
    serde_json::json!({ "summands": summands })
}

pub fn fourier_value(q: &Quiver, f: &FourierDecomposition) -> Value {
    let mult: BTreeMap<&str, usize> = q.nodes().iter().map(String::as_str).zip(f.multiplicities.iter().copied()).collect();
    let comps: BTreeMap<&str, &Vec<f64>> = q.nodes().iter().map(String::as_str).zip(f.components.iter()).collect();
    serde_json::json!({"multiplicities": mult, "components": comps})
}

// ---- canonical writer -----------------------------------------------------

/// Serializes `value` as canonical JSON (with a trailing newline).
/// Non-finite floats come out as `null`, which the loaders reject.
pub fn to_canonical<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Invalid(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0)?;
    out.push('\n');
    Ok(out)
}

fn format_float(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::Invalid(format!("cannot serialize non-finite value {x}")));
    }
    Ok(format!("{x:.16e}"))
}

fn write_scalar(out: &mut String, v: &Value) -> Result<()> {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                write!(out, "{u}").expect("string write");
            } else if let Some(i) = n.as_i64() {
                write!(out, "{i}").expect("string write");
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN))?);
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        _ => unreachable!("not a scalar"),
    }
    Ok(())
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, indent: usize) -> Result<()> {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_scalar(out, item)?;
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, item, indent + 1)?;
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            // serde_json's default map is ordered by key
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("strings serialize"));
                out.push_str(": ");
                write_value(out, item, indent + 1)?;
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => write_scalar(out, scalar)?,
    }
    Ok(())
}
