//! The `latticeperfect` command line.
//!
//! Exit status is 0 on success, 1 on a domain error and 2 on a usage error.
//! Domain errors print a JSON record `{"error": {"kind", "message", ...}}` on
//! stderr. Primary output goes to `--out` when given and to stdout otherwise.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use latticeperfect_core::coloring::{
    aperiodicity_determinant, extract_matrix, merge_coloring, merge_matrix, refine_coloring,
    refine_field, two_color_census, verify_perfect, Coloring, ColoringError, ColoringMatrix,
    PerfectCheck, RefinementResult, ValueField,
};
use latticeperfect_core::dynamics::{
    integrate, perturb_relax, stationary_residual, tree_counterexample, tree_spine_for_islands,
    DynamicsError, RelaxOptions,
};
use latticeperfect_core::generators::{
    bit_sequence_coloring, motif_tiling, path_coloring, periodic_lift, torus_search, BitWord,
    GeneratorError, Motif, SearchOptions,
};
use latticeperfect_core::lattice::{GridKind, LatticeError, Patch};
use latticeperfect_core::solver::{
    count_sweep, lift_solution, solve_all, Nonlinearity, SolverConfig, SolverError,
};

use crate::formats::{
    parse_json, parse_merger, read_bytes, to_json, words_text, write_bytes, ColoringFile,
    FieldFile, FormatError, MatrixFile, NonlinearitySpec, RecordEntry, SolutionSetFile,
};
use crate::manifest::{sidecar_path, RunManifest};
use crate::render::{self, RenderError};

pub const THREADS_ENV: &str = "LATTICEPERFECT_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("{message}")]
    Domain { kind: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Format(_) => "format",
            CliError::Coloring(_) => "coloring",
            CliError::Generator(_) => "generator",
            CliError::Solver(_) => "solver",
            CliError::Dynamics(_) => "dynamics",
            CliError::Lattice(_) => "lattice",
            CliError::Render(_) => "render",
            CliError::Domain { kind, .. } => kind,
        }
    }

    /// Machine-readable record printed on stderr.
    pub fn record(&self) -> Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        let nested = match self {
            CliError::Coloring(e) => Some(e),
            CliError::Generator(GeneratorError::Coloring(e)) => Some(e),
            CliError::Solver(SolverError::Coloring(e)) => Some(e),
            CliError::Dynamics(DynamicsError::Coloring(e)) => Some(e),
            _ => None,
        };
        if let Some(detail) = nested.and_then(coloring_detail) {
            body["detail"] = detail;
        }
        json!({ "error": body })
    }
}

fn coloring_detail(e: &ColoringError) -> Option<Value> {
    match e {
        ColoringError::Inconsistent {
            color,
            first,
            second,
            first_counts,
            second_counts,
        } => Some(json!({
            "color": color + 1,
            "first_vertex": first,
            "second_vertex": second,
            "first_counts": first_counts,
            "second_counts": second_counts,
        })),
        ColoringError::Incompatible(m) => Some(json!({
            "target": m.target + 1,
            "first_source": m.first_source + 1,
            "second_source": m.second_source + 1,
            "first_row": m.first_row,
            "second_row": m.second_row,
        })),
        _ => None,
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "latticeperfect",
    version,
    about = "Perfect colorings and stationary solutions of lattice equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check row sums and the zero pattern of a coloring matrix.
    ValidateMatrix(ValidateMatrixArgs),
    /// Check a coloring against a matrix.
    VerifyColoring(VerifyColoringArgs),
    /// Read off the matrix of a perfect coloring.
    ExtractMatrix(ExtractMatrixArgs),
    /// Coarsest equitable refinement of a coloring or value field.
    Refine(RefineArgs),
    /// Merge colors of a matrix (and optionally a coloring).
    Merge(MergeArgs),
    /// Exact determinant test for aperiodic colorings.
    Aperiodicity(AperiodicityArgs),
    /// Two-color classification by diagonal entries.
    Census(CensusArgs),
    /// Periodic words realizing a path matrix.
    MakePathColoring(MakePathColoringArgs),
    /// Finest coloring with two given period vectors.
    LiftPeriodic(LiftPeriodicArgs),
    /// Tile a torus with a rectangular motif.
    TileMotif(TileMotifArgs),
    /// Window coloring driven by a bit sequence.
    BitwordColoring(BitwordColoringArgs),
    /// Exhaustive search for perfect colorings of a torus.
    SearchTorus(SearchTorusArgs),
    /// All solutions of the finite stationary system.
    Solve(SolveArgs),
    /// Solution counts over a range of coupling strengths.
    Sweep(SweepArgs),
    /// Spread a solution over a coloring.
    LiftSolution(LiftSolutionArgs),
    /// Integrate the lattice equation from a field.
    Simulate(SimulateArgs),
    /// Perturb stationary fields and watch them relax.
    ProbeStability(ProbeStabilityArgs),
    /// Three-valued stationary solution on the binary tree.
    TreeExample(TreeExampleArgs),
    /// Draw a coloring or value field.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReactionArgs {
    /// Nagumo nonlinearity s(1-s)(s-a) with this a.
    #[arg(long, conflicts_with = "poly")]
    pub nagumo_a: Option<f64>,
    /// Polynomial nonlinearity, coefficients in ascending degree.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly: Option<Vec<f64>>,
}

impl ReactionArgs {
    fn build(&self) -> Result<Option<Nonlinearity>, CliError> {
        Ok(match (&self.nagumo_a, &self.poly) {
            (Some(a), None) => Some(Nonlinearity::nagumo(*a)?),
            (None, Some(c)) => Some(Nonlinearity::polynomial(c.clone())?),
            _ => None,
        })
    }

    fn require(&self) -> Result<Nonlinearity, CliError> {
        self.build()?
            .ok_or_else(|| usage("one of --nagumo-a or --poly is required"))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateMatrixArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Expected degree; must match the file.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyColoringArgs {
    #[arg(long)]
    pub coloring: PathBuf,
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExtractMatrixArgs {
    #[arg(long)]
    pub coloring: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RefineArgs {
    #[arg(long, conflicts_with = "field", required_unless_present = "field")]
    pub coloring: Option<PathBuf>,
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Values closer than this count as equal.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the refined partition as a coloring file.
    #[arg(long)]
    pub coloring_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MergeArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// JSON array of 1-based target colors.
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long, requires = "coloring_out")]
    pub coloring: Option<PathBuf>,
    #[arg(long, requires = "coloring")]
    pub coloring_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AperiodicityArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// square, triangular or hexagonal.
    #[arg(long)]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CensusArgs {
    #[arg(long)]
    pub grid: String,
    #[arg(long)]
    pub m11: u32,
    #[arg(long)]
    pub m22: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MakePathColoringArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LiftPeriodicArgs {
    #[arg(long)]
    pub grid: String,
    /// First period vector as `x,y`.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub v1: Vec<i64>,
    /// Second period vector as `x,y`.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub v2: Vec<i64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TileMotifArgs {
    #[arg(long)]
    pub grid: String,
    /// Rows separated by `;`, 1-based labels separated by `,`; first row is y = 0.
    #[arg(long)]
    pub motif: String,
    #[arg(long)]
    pub width: usize,
    #[arg(long)]
    pub height: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BitwordColoringArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Word over {0, 1}, repeated periodically.
    #[arg(long)]
    pub bits: String,
    #[arg(long)]
    pub width: usize,
    #[arg(long)]
    pub height: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchTorusArgs {
    #[arg(long)]
    pub grid: String,
    #[arg(long)]
    pub width: usize,
    #[arg(long)]
    pub height: usize,
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub limit: usize,
    /// Identify colorings related by rotations and reflections too.
    #[arg(long)]
    pub point_symmetries: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub random_seeds: usize,
    /// Skip seeds built from tuples of roots of f.
    #[arg(long)]
    pub no_structured_seeds: bool,
    #[arg(long, default_value_t = 1e-12)]
    pub newton_tol: f64,
}

impl SolverArgs {
    fn config(&self, d: f64) -> SolverConfig {
        let mut c = SolverConfig::new(d);
        c.rng_seed = self.seed;
        c.random_seeds = self.random_seeds;
        c.structured_seeds = !self.no_structured_seeds;
        c.newton_tol = self.newton_tol;
        c
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Expected degree; must match the file.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub reaction: ReactionArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Coupling strengths, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub d_values: Vec<f64>,
    /// Bisect each count change down to this width.
    #[arg(long)]
    pub refine_width: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub reaction: ReactionArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LiftSolutionArgs {
    #[arg(long)]
    pub coloring: PathBuf,
    #[arg(long)]
    pub matrix: PathBuf,
    /// Solution set file; pick a record with --index.
    #[arg(
        long,
        requires = "index",
        conflicts_with = "v",
        required_unless_present = "v"
    )]
    pub solutions: Option<PathBuf>,
    /// 1-based record number.
    #[arg(long)]
    pub index: Option<usize>,
    /// Values per color, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub field: PathBuf,
    #[arg(long)]
    pub d: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub reaction: ReactionArgs,
    #[arg(long)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    /// Final field.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProbeStabilityArgs {
    /// Stationary field; needs --d and a nonlinearity.
    #[arg(long, conflicts_with_all = ["solutions", "coloring"], required_unless_present = "solutions")]
    pub field: Option<PathBuf>,
    /// Solution set file; every record is lifted over --coloring and probed.
    #[arg(long, requires = "coloring")]
    pub solutions: Option<PathBuf>,
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub reaction: ReactionArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 4)]
    pub trials: usize,
    #[arg(long, default_value_t = 100.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TreeExampleArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub b: f64,
    /// Longest island of c values inside the window.
    #[arg(long, default_value_t = 6)]
    pub max_island: usize,
    /// Levels below each spine vertex.
    #[arg(long, default_value_t = 10)]
    pub depth: usize,
    /// Value field file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Indented text drawing of the labels.
    #[arg(long)]
    pub text: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RenderArgs {
    #[arg(long, conflicts_with = "field", required_unless_present = "field")]
    pub coloring: Option<PathBuf>,
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// PPM image, or indented text for trees.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Pixels per vertex side.
    #[arg(long, default_value_t = 8)]
    pub scale: usize,
}

/// Tracks inputs for the manifest and writes outputs.
struct Run<'a> {
    manifest: RunManifest,
    stdout: &'a mut dyn Write,
}

#[derive(Serialize)]
struct WithManifest<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    manifest: &'a RunManifest,
}

impl<'a> Run<'a> {
    fn new<P: Serialize>(command: &str, params: &P, stdout: &'a mut dyn Write) -> Self {
        Run {
            manifest: RunManifest::new(command, params),
            stdout,
        }
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = read_bytes(path)?;
        self.manifest.add_input(path, &bytes);
        Ok(bytes)
    }

    fn read_json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let bytes = self.read(path)?;
        Ok(parse_json(&bytes, &path.display().to_string())?)
    }

    fn matrix(&mut self, path: &Path, k: Option<usize>) -> Result<ColoringMatrix, CliError> {
        let file: MatrixFile = self.read_json(path)?;
        if let Some(k) = k {
            if k != file.k {
                return Err(CliError::Domain {
                    kind: "degree_mismatch",
                    message: format!("--k {k} but the matrix file has k = {}", file.k),
                });
            }
        }
        Ok(file.to_matrix()?)
    }

    fn coloring(&mut self, path: &Path) -> Result<Coloring, CliError> {
        let file: ColoringFile = self.read_json(path)?;
        Ok(file.to_coloring()?)
    }

    fn field(&mut self, path: &Path) -> Result<ValueField, CliError> {
        let file: FieldFile = self.read_json(path)?;
        Ok(file.to_field()?)
    }

    fn emit(&mut self, bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
        match out {
            Some(p) => write_bytes(p, bytes)?,
            None => self
                .stdout
                .write_all(bytes)
                .map_err(|e| usage(format!("cannot write to stdout: {e}")))?,
        }
        Ok(())
    }

    /// JSON output with the manifest embedded.
    fn json<T: Serialize>(&mut self, body: &T, out: Option<&Path>) -> Result<(), CliError> {
        let bytes = to_json(&WithManifest {
            body,
            manifest: &self.manifest,
        });
        self.emit(&bytes, out)
    }

    /// Non-JSON output; a file gets a sidecar manifest.
    fn artifact(&mut self, bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
        self.emit(bytes, out)?;
        if let Some(p) = out {
            let mut m = self.manifest.clone();
            m.add_output(p, bytes);
            write_bytes(&sidecar_path(p), &to_json(&m))?;
        }
        Ok(())
    }
}

fn grid_kind(s: &str) -> Result<GridKind, CliError> {
    s.parse().map_err(|e: LatticeError| usage(e.to_string()))
}

fn pair(v: &[i64], name: &str) -> Result<[i64; 2], CliError> {
    match v {
        [x, y] => Ok([*x, *y]),
        _ => Err(usage(format!("--{name} takes two integers x,y"))),
    }
}

fn parse_motif(s: &str) -> Result<Motif, CliError> {
    let rows: Vec<Vec<usize>> = s
        .split(';')
        .map(|row| {
            row.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| match t.parse::<usize>() {
                    Ok(c) if c > 0 => Ok(c - 1),
                    _ => Err(usage(format!("bad motif label {t:?}"))),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(usage("motif rows must be nonempty and of equal length"));
    }
    Ok(Motif::new(width, rows.len(), rows.concat())?)
}

#[derive(Serialize)]
struct RefineReport {
    class_count: usize,
    interior_class_count: usize,
    stabilized: bool,
    rounds: usize,
    induced_matrix: Option<MatrixFile>,
}

impl RefineReport {
    fn of(r: &RefinementResult) -> Self {
        RefineReport {
            class_count: r.class_count,
            interior_class_count: r.interior_class_count,
            stabilized: r.stabilized,
            rounds: r.rounds,
            induced_matrix: r.induced_matrix.as_ref().map(MatrixFile::from_matrix),
        }
    }
}

fn validate_matrix(a: &ValidateMatrixArgs, run: &mut Run) -> Result<(), CliError> {
    let m = run.matrix(&a.matrix, a.k)?;
    let r = m.validate();
    let body = json!({
        "admissible": r.admissible(),
        "n": m.n(),
        "k": m.k(),
        "row_sum_violations": r.row_sum_violations.iter()
            .map(|(row, sum)| json!({ "row": row + 1, "sum": sum }))
            .collect::<Vec<_>>(),
        "sign_asymmetries": r.sign_asymmetries.iter()
            .map(|(i, j)| [i + 1, j + 1])
            .collect::<Vec<_>>(),
    });
    run.json(&body, a.out.as_deref())
}

fn verify_coloring(a: &VerifyColoringArgs, run: &mut Run) -> Result<(), CliError> {
    let c = run.coloring(&a.coloring)?;
    let m = run.matrix(&a.matrix, None)?;
    let body = match verify_perfect(&c, &m)? {
        PerfectCheck::Perfect => json!({ "perfect": true, "violation": null }),
        PerfectCheck::Violated(v) => {
            let (x, y) = c.patch().coord(v.vertex);
            json!({
                "perfect": false,
                "violation": {
                    "vertex": v.vertex,
                    "coord": [x, y],
                    "color": v.color + 1,
                    "expected": v.expected,
                    "found": v.found,
                }
            })
        }
    };
    run.json(&body, a.out.as_deref())
}

fn extract(a: &ExtractMatrixArgs, run: &mut Run) -> Result<(), CliError> {
    let c = run.coloring(&a.coloring)?;
    let m = extract_matrix(&c)?;
    run.json(&MatrixFile::from_matrix(&m), a.out.as_deref())
}

fn refine(a: &RefineArgs, run: &mut Run) -> Result<(), CliError> {
    let (patch, r) = match (&a.coloring, &a.field) {
        (Some(p), _) => {
            let c = run.coloring(p)?;
            (c.patch().clone(), refine_coloring(&c))
        }
        (None, Some(p)) => {
            let f = run.field(p)?;
            (f.patch().clone(), refine_field(&f, a.tol))
        }
        (None, None) => return Err(usage("one of --coloring or --field is required")),
    };
    if let Some(p) = &a.coloring_out {
        let file = ColoringFile::from_coloring(&r.to_coloring(patch));
        let bytes = to_json(&WithManifest {
            body: &file,
            manifest: &run.manifest,
        });
        write_bytes(p, &bytes)?;
    }
    run.json(&RefineReport::of(&r), a.out.as_deref())
}

fn merge(a: &MergeArgs, run: &mut Run) -> Result<(), CliError> {
    let m = run.matrix(&a.matrix, None)?;
    let bytes = run.read(&a.map)?;
    let phi = parse_merger(&bytes, &a.map.display().to_string())?;
    let merged = merge_matrix(&m, &phi)?;
    if let (Some(cp), Some(out)) = (&a.coloring, &a.coloring_out) {
        let c = run.coloring(cp)?;
        let file = ColoringFile::from_coloring(&merge_coloring(&c, &phi)?);
        let bytes = to_json(&WithManifest {
            body: &file,
            manifest: &run.manifest,
        });
        write_bytes(out, &bytes)?;
    }
    run.json(&MatrixFile::from_matrix(&merged), a.out.as_deref())
}

fn aperiodicity(a: &AperiodicityArgs, run: &mut Run) -> Result<(), CliError> {
    let kind = grid_kind(&a.grid)?;
    let m = run.matrix(&a.matrix, None)?;
    let det = aperiodicity_determinant(&m, kind)?;
    let body = json!({
        "grid": kind.name(),
        "determinant": det.to_string(),
        "aperiodic": det == 0,
    });
    run.json(&body, a.out.as_deref())
}

fn census(a: &CensusArgs, run: &mut Run) -> Result<(), CliError> {
    let kind = grid_kind(&a.grid)?;
    let verdict = two_color_census(kind, a.m11, a.m22)?;
    run.artifact(format!("{}\n", verdict.name()).as_bytes(), a.out.as_deref())
}

fn make_path(a: &MakePathColoringArgs, run: &mut Run) -> Result<(), CliError> {
    let m = run.matrix(&a.matrix, None)?;
    let words = path_coloring(&m)?;
    if words.is_empty() {
        return Err(CliError::Domain {
            kind: "nonexistent",
            message: "no perfect coloring of the path has this matrix".into(),
        });
    }
    run.artifact(words_text(&words).as_bytes(), a.out.as_deref())
}

fn lift_periodic(a: &LiftPeriodicArgs, run: &mut Run) -> Result<(), CliError> {
    let kind = grid_kind(&a.grid)?;
    let lift = periodic_lift(kind, pair(&a.v1, "v1")?, pair(&a.v2, "v2")?)?;
    if let Some(p) = &a.matrix_out {
        let bytes = to_json(&WithManifest {
            body: &MatrixFile::from_matrix(&lift.matrix),
            manifest: &run.manifest,
        });
        write_bytes(p, &bytes)?;
    }
    run.json(
        &ColoringFile::from_coloring(&lift.coloring),
        a.out.as_deref(),
    )
}

fn tile(a: &TileMotifArgs, run: &mut Run) -> Result<(), CliError> {
    let kind = grid_kind(&a.grid)?;
    let motif = parse_motif(&a.motif)?;
    let c = motif_tiling(kind, &motif, a.width, a.height)?;
    run.json(&ColoringFile::from_coloring(&c), a.out.as_deref())
}

fn bitword(a: &BitwordColoringArgs, run: &mut Run) -> Result<(), CliError> {
    let m = run.matrix(&a.matrix, None)?;
    let bits = BitWord::parse(&a.bits).map_err(|e| usage(e.to_string()))?;
    let c = bit_sequence_coloring(&m, &bits, a.width, a.height)?;
    run.json(&ColoringFile::from_coloring(&c), a.out.as_deref())
}

fn search(a: &SearchTorusArgs, run: &mut Run) -> Result<(), CliError> {
    let kind = grid_kind(&a.grid)?;
    let m = run.matrix(&a.matrix, None)?;
    let patch = Arc::new(Patch::torus(kind, a.width, a.height)?);
    let r = torus_search(
        patch,
        &m,
        SearchOptions {
            limit: a.limit,
            point_symmetries: a.point_symmetries,
        },
    )?;
    let body = json!({
        "count": r.colorings.len(),
        "truncated": r.truncated,
        "nodes": r.nodes,
        "colorings": r.colorings.iter().map(ColoringFile::from_coloring).collect::<Vec<_>>(),
    });
    run.json(&body, a.out.as_deref())
}

fn solve(a: &SolveArgs, run: &mut Run) -> Result<(), CliError> {
    run.manifest.seed = Some(a.solver.seed);
    let m = run.matrix(&a.matrix, a.k)?;
    let f = a.reaction.require()?;
    let set = solve_all(&m, &f, &a.solver.config(a.d))?;
    run.json(&SolutionSetFile::from_set(&m, &f, &set), a.out.as_deref())
}

fn sweep(a: &SweepArgs, run: &mut Run) -> Result<(), CliError> {
    run.manifest.seed = Some(a.solver.seed);
    let m = run.matrix(&a.matrix, None)?;
    let f = a.reaction.require()?;
    let s = count_sweep(&m, &f, &a.d_values, &a.solver.config(1.0), a.refine_width)?;
    let body = json!({
        "matrix": MatrixFile::from_matrix(&m),
        "nonlinearity": NonlinearitySpec::of(&f),
        "points": s.points.iter().map(|p| json!({ "d": p.d, "count": p.count })).collect::<Vec<_>>(),
        "changes": s.changes.iter().map(|c| json!({
            "lo": c.lo, "hi": c.hi, "count_lo": c.count_lo, "count_hi": c.count_hi,
        })).collect::<Vec<_>>(),
    });
    run.json(&body, a.out.as_deref())
}

fn lift(a: &LiftSolutionArgs, run: &mut Run) -> Result<(), CliError> {
    let c = run.coloring(&a.coloring)?;
    let m = run.matrix(&a.matrix, None)?;
    let v = match (&a.solutions, a.index, &a.v) {
        (Some(p), Some(i), _) => {
            let set: SolutionSetFile = run.read_json(p)?;
            let rec = i
                .checked_sub(1)
                .and_then(|i| set.records.get(i))
                .ok_or_else(|| usage(format!("--index {i} outside 1..={}", set.records.len())))?;
            rec.v.clone()
        }
        (None, _, Some(v)) => v.clone(),
        _ => return Err(usage("give --solutions with --index, or --v")),
    };
    let field = lift_solution(&c, &m, &v)?;
    run.json(&FieldFile::from_field(&field), a.out.as_deref())
}

fn simulate(a: &SimulateArgs, run: &mut Run) -> Result<(), CliError> {
    let field = run.field(&a.field)?;
    let f = a.reaction.require()?;
    let stats = integrate(&field, a.d, &f, a.t_end, a.dt)?;
    if let Some(p) = &a.out {
        let bytes = to_json(&WithManifest {
            body: &FieldFile::from_field(&stats.final_field),
            manifest: &run.manifest,
        });
        write_bytes(p, &bytes)?;
    }
    let body = json!({
        "steps": stats.steps,
        "dt": stats.dt,
        "max_drift": stats.max_drift,
        "final_residual": stats.final_residual,
        "min_value": stats.min_value,
        "max_value": stats.max_value,
    });
    run.json(&body, None)
}

fn probe(a: &ProbeStabilityArgs, run: &mut Run) -> Result<(), CliError> {
    run.manifest.seed = Some(a.seed);
    let options = RelaxOptions {
        epsilon: a.epsilon,
        trials: a.trials,
        t_end: a.t_end,
        dt: a.dt,
        seed: a.seed,
    };
    if let Some(p) = &a.field {
        let field = run.field(p)?;
        let f = a.reaction.require()?;
        let d = a.d.ok_or_else(|| usage("--field needs --d"))?;
        let out = perturb_relax(&field, d, &f, options)?;
        let body = json!({
            "verdict": out.verdict.name(),
            "max_final_distance": finite_or_null(out.max_final_distance),
            "trials_run": out.trials_run,
        });
        return run.json(&body, a.out.as_deref());
    }
    let (Some(sp), Some(cp)) = (&a.solutions, &a.coloring) else {
        return Err(usage("give --field, or --solutions with --coloring"));
    };
    let set: SolutionSetFile = run.read_json(sp)?;
    let c = run.coloring(cp)?;
    let m = set.matrix.to_matrix()?;
    let f = set.nonlinearity.build()?;
    let d = set.d;
    let rows: Vec<Result<Value, CliError>> = set
        .records
        .par_iter()
        .enumerate()
        .map(|(i, rec): (usize, &RecordEntry)| {
            let field = lift_solution(&c, &m, &rec.v)?;
            let base = stationary_residual(&field, d, &f);
            let out = perturb_relax(&field, d, &f, options)?;
            Ok(json!({
                "index": i + 1,
                "eigen_verdict": rec.verdict,
                "relax_verdict": out.verdict.name(),
                "lifted_residual": base,
                "max_final_distance": finite_or_null(out.max_final_distance),
            }))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    run.json(&json!({ "d": d, "probes": rows }), a.out.as_deref())
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn tree(a: &TreeExampleArgs, run: &mut Run) -> Result<(), CliError> {
    let spine = tree_spine_for_islands(a.max_island);
    let ex = tree_counterexample(a.a, a.b, spine, a.depth)?;
    let residual = stationary_residual(&ex.field, 1.0, &ex.f);
    let r = refine_field(&ex.field, 1e-8);
    if let Some(p) = &a.out {
        let bytes = to_json(&WithManifest {
            body: &FieldFile::from_field(&ex.field),
            manifest: &run.manifest,
        });
        write_bytes(p, &bytes)?;
    }
    if let Some(p) = &a.text {
        let labels = Coloring::new(
            ex.patch.clone(),
            ex.labels.iter().map(|&l| l as usize).collect(),
            3,
        )?;
        let text = render::coloring_tree_text(&labels)?;
        run.artifact(text.as_bytes(), Some(p))?;
    }
    let body = json!({
        "values": ex.values,
        "f_values": ex.f_values,
        "nonlinearity": NonlinearitySpec::of(&ex.f),
        "d": 1.0,
        "spine": spine,
        "depth": a.depth,
        "residual": residual,
        "refined_classes": r.class_count,
        "interior_classes": r.interior_class_count,
        "stabilized": r.stabilized,
    });
    run.json(&body, None)
}

fn render_cmd(a: &RenderArgs, run: &mut Run) -> Result<(), CliError> {
    enum Subject {
        Colors(Coloring),
        Values(ValueField),
    }
    let subject = match (&a.coloring, &a.field) {
        (Some(p), _) => Subject::Colors(run.coloring(p)?),
        (None, Some(p)) => Subject::Values(run.field(p)?),
        (None, None) => return Err(usage("one of --coloring or --field is required")),
    };
    let is_tree = match &subject {
        Subject::Colors(c) => c.patch().kind() == GridKind::BinaryTree,
        Subject::Values(f) => f.patch().kind() == GridKind::BinaryTree,
    };
    if is_tree {
        let text = match &subject {
            Subject::Colors(c) => render::coloring_tree_text(c)?,
            Subject::Values(f) => render::field_tree_text(f)?,
        };
        return run.artifact(text.as_bytes(), Some(&a.out));
    }
    let image = match &subject {
        Subject::Colors(c) => render::coloring_ppm(c, a.scale)?,
        Subject::Values(f) => render::field_ppm(f, a.scale)?,
    };
    run.artifact(&image, Some(&a.out))?;
    if let Some(p) = &a.svg {
        let svg = match &subject {
            Subject::Colors(c) => render::coloring_svg(c, a.scale)?,
            Subject::Values(f) => render::field_svg(f, a.scale)?,
        };
        run.artifact(svg.as_bytes(), Some(p))?;
    }
    Ok(())
}

/// Runs one parsed command.
pub fn execute(command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    macro_rules! go {
        ($name:literal, $args:expr, $f:ident) => {{
            let mut run = Run::new($name, $args, stdout);
            $f($args, &mut run)
        }};
    }
    match command {
        Command::ValidateMatrix(a) => go!("validate-matrix", a, validate_matrix),
        Command::VerifyColoring(a) => go!("verify-coloring", a, verify_coloring),
        Command::ExtractMatrix(a) => go!("extract-matrix", a, extract),
        Command::Refine(a) => go!("refine", a, refine),
        Command::Merge(a) => go!("merge", a, merge),
        Command::Aperiodicity(a) => go!("aperiodicity", a, aperiodicity),
        Command::Census(a) => go!("census", a, census),
        Command::MakePathColoring(a) => go!("make-path-coloring", a, make_path),
        Command::LiftPeriodic(a) => go!("lift-periodic", a, lift_periodic),
        Command::TileMotif(a) => go!("tile-motif", a, tile),
        Command::BitwordColoring(a) => go!("bitword-coloring", a, bitword),
        Command::SearchTorus(a) => go!("search-torus", a, search),
        Command::Solve(a) => go!("solve", a, solve),
        Command::Sweep(a) => go!("sweep", a, sweep),
        Command::LiftSolution(a) => go!("lift-solution", a, lift),
        Command::Simulate(a) => go!("simulate", a, simulate),
        Command::ProbeStability(a) => go!("probe-stability", a, probe),
        Command::TreeExample(a) => go!("tree-example", a, tree),
        Command::Render(a) => go!("render", a, render_cmd),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        usage(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(e.to_string()))
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match configure_threads().and_then(|()| execute(&cli.command, stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = stderr.write_all(&to_json(&e.record()));
            e.exit_code()
        }
    }
}
