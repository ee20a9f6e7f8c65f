//! JSON file formats.
//!
//! Colors are stored 1-based; the core library works with 0-based indices.
//! Reals are written in the shortest decimal form that parses back to the
//! same `f64`, so a parse followed by a write reproduces the file exactly.

use std::path::Path;
use std::sync::Arc;

use latticeperfect_core::coloring::{Coloring, ColoringMatrix, MergerMap, ValueField};
use latticeperfect_core::lattice::{Extents, GridKind, Patch, Wrap};
use latticeperfect_core::solver::{Nonlinearity, SolutionRecord, SolutionSet, Verdict};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::manifest::RunManifest;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

/// Reads a whole file, keeping the path in the error.
pub fn read_bytes(path: &Path) -> Result<Vec<u8>, FormatError> {
    std::fs::read(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), FormatError> {
    std::fs::write(path, bytes).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_json<T: DeserializeOwned>(bytes: &[u8], path: &str) -> Result<T, FormatError> {
    serde_json::from_slice(bytes).map_err(|source| FormatError::Json {
        path: path.to_string(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("in-memory JSON serialization");
    out.push(b'\n');
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ColoringMatrix) -> Self {
        MatrixFile {
            n: m.n(),
            k: m.k(),
            rows: m.to_rows(),
            manifest: None,
        }
    }

    pub fn to_matrix(&self) -> Result<ColoringMatrix, FormatError> {
        if self.rows.len() != self.n {
            return Err(invalid(format!(
                "matrix declares n = {} but has {} rows",
                self.n,
                self.rows.len()
            )));
        }
        ColoringMatrix::new(self.k, &self.rows).map_err(|e| invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub kind: String,
    pub dims: Vec<usize>,
    /// Wraparound along x and y.
    pub wrap: [bool; 2],
}

impl GridSpec {
    pub fn of(patch: &Patch) -> Self {
        let w = patch.wrap();
        GridSpec {
            kind: patch.kind().name().to_string(),
            dims: patch.extents().to_vec(),
            wrap: [w.x, w.y],
        }
    }

    pub fn to_patch(&self) -> Result<Patch, FormatError> {
        let kind: GridKind = self
            .kind
            .parse()
            .map_err(|e: latticeperfect_core::lattice::LatticeError| invalid(e.to_string()))?;
        let extents = Extents::from_slice(kind, &self.dims).map_err(|e| invalid(e.to_string()))?;
        let wrap = Wrap {
            x: self.wrap[0],
            y: self.wrap[1],
        };
        Patch::new(kind, extents, wrap).map_err(|e| invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub grid: GridSpec,
    /// Number of colors; may exceed the largest label present.
    pub n: usize,
    /// 1-based labels in vertex order (row-major on planar grids).
    pub colors: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl ColoringFile {
    pub fn from_coloring(c: &Coloring) -> Self {
        ColoringFile {
            grid: GridSpec::of(c.patch()),
            n: c.n(),
            colors: c.colors().iter().map(|&x| x + 1).collect(),
            manifest: None,
        }
    }

    pub fn to_coloring(&self) -> Result<Coloring, FormatError> {
        let patch = Arc::new(self.grid.to_patch()?);
        if let Some(v) = self.colors.iter().position(|&c| c == 0) {
            return Err(invalid(format!(
                "vertex {v} has label 0; labels start at 1"
            )));
        }
        let colors = self.colors.iter().map(|&c| c - 1).collect();
        Coloring::new(patch, colors, self.n).map_err(|e| invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldFile {
    pub grid: GridSpec,
    /// Values in vertex order.
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl FieldFile {
    pub fn from_field(f: &ValueField) -> Self {
        FieldFile {
            grid: GridSpec::of(f.patch()),
            values: f.values().to_vec(),
            manifest: None,
        }
    }

    pub fn to_field(&self) -> Result<ValueField, FormatError> {
        let patch = Arc::new(self.grid.to_patch()?);
        if self.values.iter().any(|x| !x.is_finite()) {
            return Err(invalid("field values must be finite"));
        }
        ValueField::new(patch, self.values.clone()).map_err(|e| invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonlinearitySpec {
    Nagumo { a: f64 },
    Polynomial { coefficients: Vec<f64> },
}

impl NonlinearitySpec {
    pub fn of(f: &Nonlinearity) -> Self {
        match f {
            Nonlinearity::Nagumo { a } => NonlinearitySpec::Nagumo { a: *a },
            Nonlinearity::Polynomial(c) => NonlinearitySpec::Polynomial {
                coefficients: c.clone(),
            },
        }
    }

    pub fn build(&self) -> Result<Nonlinearity, FormatError> {
        match self {
            NonlinearitySpec::Nagumo { a } => Nonlinearity::nagumo(*a),
            NonlinearitySpec::Polynomial { coefficients } => {
                Nonlinearity::polynomial(coefficients.clone())
            }
        }
        .map_err(|e| invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordEntry {
    pub v: Vec<f64>,
    pub residual: f64,
    pub abscissa: f64,
    pub verdict: String,
}

impl RecordEntry {
    pub fn of(r: &SolutionRecord) -> Self {
        RecordEntry {
            v: r.v.clone(),
            residual: r.residual_norm,
            abscissa: r.spectral_abscissa,
            verdict: r.verdict.name().to_string(),
        }
    }

    pub fn verdict(&self) -> Result<Verdict, FormatError> {
        match self.verdict.as_str() {
            "stable" => Ok(Verdict::Stable),
            "unstable" => Ok(Verdict::Unstable),
            "marginal" => Ok(Verdict::Marginal),
            other => Err(invalid(format!("unknown verdict {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSetFile {
    pub matrix: MatrixFile,
    pub nonlinearity: NonlinearitySpec,
    pub d: f64,
    pub structured_seeds: usize,
    pub random_seeds: usize,
    pub converged_runs: usize,
    pub completeness_note: String,
    pub count: usize,
    pub records: Vec<RecordEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl SolutionSetFile {
    pub fn from_set(m: &ColoringMatrix, f: &Nonlinearity, set: &SolutionSet) -> Self {
        SolutionSetFile {
            matrix: MatrixFile::from_matrix(m),
            nonlinearity: NonlinearitySpec::of(f),
            d: set.config.d,
            structured_seeds: set.structured_seeds,
            random_seeds: set.random_seeds,
            converged_runs: set.converged_runs,
            completeness_note: set.completeness_note.clone(),
            count: set.len(),
            records: set.records.iter().map(RecordEntry::of).collect(),
            manifest: None,
        }
    }
}

/// Merger maps are plain arrays of 1-based target labels.
pub fn parse_merger(bytes: &[u8], path: &str) -> Result<MergerMap, FormatError> {
    let labels: Vec<usize> = parse_json(bytes, path)?;
    if labels.contains(&0) {
        return Err(invalid("merger labels start at 1"));
    }
    MergerMap::new(labels.iter().map(|&l| l - 1).collect()).map_err(|e| invalid(e.to_string()))
}

pub fn merger_json(map: &MergerMap) -> Vec<u8> {
    let labels: Vec<usize> = map.images().iter().map(|&t| t + 1).collect();
    let mut out = serde_json::to_vec(&labels).expect("in-memory JSON serialization");
    out.push(b'\n');
    out
}

/// One word per line, 1-based labels separated by spaces.
pub fn words_text(words: &[Vec<usize>]) -> String {
    let mut s = String::new();
    for w in words {
        let line: Vec<String> = w.iter().map(|c| (c + 1).to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn parse_words(text: &str) -> Result<Vec<Vec<usize>>, FormatError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(c) if c > 0 => Ok(c - 1),
                    _ => Err(invalid(format!("bad color label {t:?}"))),
                })
                .collect()
        })
        .collect()
}
