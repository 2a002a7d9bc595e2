//! JSON documents for grids, bodies, measures and sampled functions, CSV
//! tables, and the run configuration embedded in every output file.
//!
//! Floats are written in shortest round-trip form and parsed exactly, so a
//! document read back and written again is byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::body::{Body, StarBody, SymmetricPolytope};
use crate::error::{Error, Result};
use crate::geom::{check_dim, vec_from_slice, vec_to_vec, Vec3};
use crate::lp::LpParams;
use crate::measure::{Atom, DiscreteSphericalMeasure};
use crate::solver::TraceRow;
use crate::sphere::{EvenSphericalFunction, GridDescriptor, SphericalGrid};

/// Largest node count accepted on either sphere.
pub const MAX_NODES: usize = 8192;

/// Parameters of one command invocation. Serialized into every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub flags: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            dim: None,
            p: None,
            grid: None,
            seed: None,
            tolerances: BTreeMap::new(),
            input: None,
            output: None,
            flags: BTreeMap::new(),
        }
    }

    pub fn flag(mut self, key: &str, value: impl ToString) -> Self {
        self.flags.insert(key.to_string(), value.to_string());
        self
    }

    /// Checks `p`, `dim` and the resolution against the supported ranges.
    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.dim {
            check_dim(d)?;
            if let Some(p) = self.p {
                LpParams::new(d, p)?;
            }
            if let Some(r) = self.grid {
                check_resolution(d, r)?;
            }
        } else if let Some(p) = self.p {
            LpParams::new(2, p)?;
        }
        Ok(())
    }
}

/// Resolutions must be even and give at most [`MAX_NODES`] nodes.
pub fn check_resolution(dim: usize, resolution: usize) -> Result<()> {
    let nodes = if dim == 2 { resolution } else { 2 * resolution * resolution };
    if resolution < 4 || resolution % 2 == 1 || nodes > MAX_NODES {
        return Err(Error::Invalid(format!(
            "grid resolution {resolution} out of range for n = {dim} (even, at least 4, at most {MAX_NODES} nodes)"
        )));
    }
    Ok(())
}

/// A payload with the optional config block on top.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    #[serde(flatten)]
    pub data: T,
}

impl<T> Document<T> {
    pub fn new(config: Option<RunConfig>, data: T) -> Self {
        Self { config, data }
    }
}

/// `{"kind": "polytope", "dim", "normals", "support"}` or
/// `{"kind": "radial", "grid", "values"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BodyJson {
    Polytope {
        dim: usize,
        normals: Vec<Vec<f64>>,
        support: Vec<f64>,
    },
    Radial {
        grid: GridDescriptor,
        values: Vec<f64>,
    },
}

impl From<&SymmetricPolytope> for BodyJson {
    fn from(poly: &SymmetricPolytope) -> Self {
        let d = poly.dim();
        BodyJson::Polytope {
            dim: d,
            normals: poly.normals().iter().map(|v| vec_to_vec(d, v)).collect(),
            support: poly.support().to_vec(),
        }
    }
}

impl From<&StarBody> for BodyJson {
    fn from(star: &StarBody) -> Self {
        BodyJson::Radial { grid: star.grid().descriptor(), values: star.values().to_vec() }
    }
}

impl From<&Body> for BodyJson {
    fn from(body: &Body) -> Self {
        match body {
            Body::Polytope(p) => p.into(),
            Body::Star(s) => s.into(),
        }
    }
}

impl BodyJson {
    pub fn into_body(self) -> Result<Body> {
        match self {
            BodyJson::Polytope { dim, normals, support } => {
                check_dim(dim)?;
                let normals: Vec<Vec3> = normals.iter().map(|v| vec_from_slice(dim, v)).collect::<Result<_>>()?;
                Ok(Body::Polytope(SymmetricPolytope::from_normals(dim, &normals, &support)?))
            }
            BodyJson::Radial { grid, values } => {
                let grid = Arc::new(grid.build()?);
                if values.len() != grid.len() {
                    return Err(Error::Invalid(format!(
                        "{} radial values for a grid of {} nodes",
                        values.len(),
                        grid.len()
                    )));
                }
                Ok(Body::Star(StarBody::new(EvenSphericalFunction::new(grid, values)?)?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub u: Vec<f64>,
    pub w: f64,
}

/// `{"dim", "even", "atoms": [{"u", "w"}, ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub dim: usize,
    pub even: bool,
    pub atoms: Vec<AtomJson>,
}

impl From<&DiscreteSphericalMeasure> for MeasureJson {
    fn from(mu: &DiscreteSphericalMeasure) -> Self {
        let d = mu.dim();
        MeasureJson {
            dim: d,
            even: mu.is_even(),
            atoms: mu.atoms().iter().map(|a| AtomJson { u: vec_to_vec(d, &a.u), w: a.w }).collect(),
        }
    }
}

impl MeasureJson {
    /// Measures flagged even are brought into the paired layout.
    pub fn into_measure(self) -> Result<DiscreteSphericalMeasure> {
        check_dim(self.dim)?;
        let atoms = self
            .atoms
            .iter()
            .map(|a| Ok(Atom { u: vec_from_slice(self.dim, &a.u)?, w: a.w }))
            .collect::<Result<Vec<_>>>()?;
        let mu = DiscreteSphericalMeasure::new(self.dim, atoms)?;
        if self.even {
            mu.symmetrized()
        } else {
            Ok(mu)
        }
    }
}

/// Even function sampled on a grid: `{"grid", "values"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub grid: GridDescriptor,
    pub values: Vec<f64>,
}

impl From<&EvenSphericalFunction> for FunctionJson {
    fn from(f: &EvenSphericalFunction) -> Self {
        FunctionJson { grid: f.grid().descriptor(), values: f.values().to_vec() }
    }
}

impl FunctionJson {
    pub fn into_function(self) -> Result<EvenSphericalFunction> {
        let grid = Arc::new(self.grid.build()?);
        if self.values.len() != grid.len() {
            return Err(Error::Invalid(format!("{} values for a grid of {} nodes", self.values.len(), grid.len())));
        }
        EvenSphericalFunction::new(grid, self.values)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

/// Reads a JSON document, telling a missing file apart from a malformed one.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::Missing(path.display().to_string()),
        _ => Error::Io(e),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed { path: path.display().to_string(), message: e.to_string() })
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| fmt_f64(x)).collect());
    }

    /// CSV text; the config, if any, goes on a leading `# config:` line.
    pub fn to_csv(&self, config: Option<&RunConfig>) -> Result<String> {
        let mut out = Vec::new();
        if let Some(c) = config {
            writeln!(out, "# config: {}", serde_json::to_string(c)?)?;
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.header).map_err(csv_error)?;
            for r in &self.rows {
                w.write_record(r).map_err(csv_error)?;
            }
            w.flush()?;
        }
        String::from_utf8(out).map_err(|e| Error::Invalid(e.to_string()))
    }

    pub fn write(&self, path: &Path, config: Option<&RunConfig>) -> Result<()> {
        fs::write(path, self.to_csv(config)?)?;
        Ok(())
    }

    /// Parses text written by [`Table::to_csv`]; comment lines are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header = r.headers().map_err(csv_error)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()).map_err(csv_error))
            .collect::<Result<_>>()?;
        Ok(Self { header, rows })
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Invalid(format!("csv: {e}"))
}

fn node_header(dim: usize, last: &str) -> Vec<&str> {
    let mut h = vec!["x", "y", "z"];
    h.truncate(dim);
    h.push(last);
    h
}

/// One row per node: coordinates then value.
pub fn node_table(grid: &SphericalGrid, values: &[f64], column: &str) -> Table {
    let d = grid.dim();
    let mut t = Table::new(&node_header(d, column));
    for (u, &v) in grid.nodes().iter().zip(values) {
        let mut row = vec_to_vec(d, u);
        row.push(v);
        t.push_numbers(&row);
    }
    t
}

pub fn trace_table(trace: &[TraceRow]) -> Table {
    let mut t = Table::new(&["iteration", "objective", "grad_norm", "step"]);
    for r in trace {
        t.push(vec![r.iteration.to_string(), fmt_f64(r.objective), fmt_f64(r.grad_norm), fmt_f64(r.step)]);
    }
    t
}
