//! Roots of the finite stationary system `0 = d (m v - k v) + F(v)`, their
//! linear stability, and their transport to lattices and across mergers.

mod nonlinearity;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use libm::{fabs, sqrt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloring::{
    verify_perfect, Coloring, ColoringError, ColoringMatrix, MergerMap, ValueField,
};
use crate::linalg::DenseMatrix;

pub use nonlinearity::{polynomial_real_roots, Nonlinearity};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("vector has length {got}, system has {expected} unknowns")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0}")]
    BadParameter(&'static str),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("coloring is not perfect for the matrix (vertex {vertex})")]
    Unverified { vertex: usize },
    #[error("eigenvalue iteration did not converge")]
    EigenFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub d: f64,
    pub newton_tol: f64,
    pub max_iter: usize,
    pub dedup_tol: f64,
    pub stab_tol: f64,
    /// Use every tuple of real roots of `f` as a seed (skipped when there are
    /// more than `max_structured` tuples).
    pub structured_seeds: bool,
    pub max_structured: usize,
    pub random_seeds: usize,
    pub rng_seed: u64,
}

impl SolverConfig {
    pub fn new(d: f64) -> Self {
        SolverConfig {
            d,
            newton_tol: 1e-12,
            max_iter: 100,
            dedup_tol: 1e-8,
            stab_tol: 1e-9,
            structured_seeds: true,
            max_structured: 1 << 16,
            random_seeds: 64,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(SolverError::BadParameter("d must be positive"));
        }
        if !(self.newton_tol > 0.0 && self.dedup_tol > 0.0 && self.stab_tol >= 0.0) {
            return Err(SolverError::BadParameter("tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

impl Verdict {
    pub fn from_abscissa(abscissa: f64, tol: f64) -> Self {
        if abscissa < -tol {
            Verdict::Stable
        } else if abscissa > tol {
            Verdict::Unstable
        } else {
            Verdict::Marginal
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Marginal => "marginal",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRecord {
    pub v: Vec<f64>,
    /// Max-norm of the residual.
    pub residual_norm: f64,
    /// Largest real part of a Jacobian eigenvalue.
    pub spectral_abscissa: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub config: SolverConfig,
    pub records: Vec<SolutionRecord>,
    pub structured_seeds: usize,
    pub random_seeds: usize,
    pub converged_runs: usize,
    pub completeness_note: String,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn check_len(m: &ColoringMatrix, v: &[f64]) -> Result<(), SolverError> {
    if v.len() != m.n() {
        return Err(SolverError::DimensionMismatch {
            expected: m.n(),
            got: v.len(),
        });
    }
    Ok(())
}

/// `d (m v - k v) + F(v)`.
pub fn residual(
    m: &ColoringMatrix,
    d: f64,
    f: &Nonlinearity,
    v: &[f64],
) -> Result<Vec<f64>, SolverError> {
    check_len(m, v)?;
    Ok(residual_unchecked(m, d, f, v))
}

fn residual_unchecked(m: &ColoringMatrix, d: f64, f: &Nonlinearity, v: &[f64]) -> Vec<f64> {
    let k = m.k() as f64;
    (0..m.n())
        .map(|i| {
            let mv: f64 = m
                .row(i)
                .iter()
                .zip(v)
                .map(|(&a, &x)| f64::from(a) * x)
                .sum();
            d * (mv - k * v[i]) + f.eval(v[i])
        })
        .collect()
}

/// `d (m - k I) + diag(f'(v_i))`.
pub fn jacobian(
    m: &ColoringMatrix,
    d: f64,
    f: &Nonlinearity,
    v: &[f64],
) -> Result<DenseMatrix, SolverError> {
    check_len(m, v)?;
    Ok(jacobian_unchecked(m, d, f, v))
}

fn jacobian_unchecked(m: &ColoringMatrix, d: f64, f: &Nonlinearity, v: &[f64]) -> DenseMatrix {
    let k = m.k() as f64;
    DenseMatrix::from_fn(m.n(), |i, j| {
        let diag = if i == j {
            f.derivative(v[i]) - d * k
        } else {
            0.0
        };
        d * f64::from(m.get(i, j)) + diag
    })
}

pub fn max_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |a, &b| a.max(fabs(b)))
}

fn l2(x: &[f64]) -> f64 {
    sqrt(x.iter().map(|a| a * a).sum())
}

/// Residual, spectral abscissa and verdict at `v`.
pub fn stability(
    m: &ColoringMatrix,
    d: f64,
    f: &Nonlinearity,
    v: &[f64],
    stab_tol: f64,
) -> Result<SolutionRecord, SolverError> {
    let r = residual(m, d, f, v)?;
    let eig = jacobian_unchecked(m, d, f, v)
        .eigenvalues()
        .ok_or(SolverError::EigenFailure)?;
    let abscissa = eig.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(SolutionRecord {
        v: v.to_vec(),
        residual_norm: max_norm(&r),
        spectral_abscissa: abscissa,
        verdict: Verdict::from_abscissa(abscissa, stab_tol),
    })
}

/// Damped Newton from `x`. Returns the polished point when its residual
/// reaches `tol`.
pub fn newton(
    m: &ColoringMatrix,
    d: f64,
    f: &Nonlinearity,
    mut x: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Option<Vec<f64>> {
    let mut r = residual_unchecked(m, d, f, &x);
    let mut best = (max_norm(&r), x.clone());
    let mut polish = 0;
    for _ in 0..max_iter {
        let norm = max_norm(&r);
        if norm <= tol {
            polish += 1;
            if polish > 3 || norm == 0.0 {
                break;
            }
        }
        let Some(step) = jacobian_unchecked(m, d, f, &x).solve(&r) else {
            break;
        };
        let base = l2(&r);
        let mut lambda = 1.0;
        let (next_x, next_r) = loop {
            let cand: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a - lambda * s).collect();
            let cr = residual_unchecked(m, d, f, &cand);
            if l2(&cr) < (1.0 - 1e-4 * lambda) * base || lambda < 1e-6 {
                break (cand, cr);
            }
            lambda *= 0.5;
        };
        if max_norm(&next_x) > 1e6 || next_x.iter().any(|a| !a.is_finite()) {
            break;
        }
        x = next_x;
        r = next_r;
        let norm = max_norm(&r);
        if norm < best.0 {
            best = (norm, x.clone());
        }
    }
    (best.0 <= tol).then_some(best.1)
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Sorts lexicographically and keeps points pairwise farther than `tol` apart
/// in the max-norm.
pub fn dedup_points(mut points: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| lex(a, b));
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for p in points {
        let close = kept
            .iter()
            .any(|q| p.iter().zip(q).all(|(a, b)| fabs(a - b) <= tol));
        if !close {
            kept.push(p);
        }
    }
    kept
}

/// Multi-start Newton enumeration of stationary solutions.
///
/// Seeds are every tuple of real roots of `f` followed by `random_seeds`
/// uniform points in the root box widened by 0.5. The enumeration is
/// heuristic: it is complete near `d = 0`, where every solution sits next to a
/// root tuple, but may miss solutions for larger `d`.
pub fn solve_all(
    m: &ColoringMatrix,
    f: &Nonlinearity,
    config: &SolverConfig,
) -> Result<SolutionSet, SolverError> {
    config.validate()?;
    let n = m.n();
    let roots = f.real_roots();
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    let tuple_count = roots.len().checked_pow(n as u32).unwrap_or(usize::MAX);
    if config.structured_seeds && !roots.is_empty() && tuple_count <= config.max_structured {
        for idx in 0..tuple_count {
            let mut rest = idx;
            let seed = (0..n)
                .map(|_| {
                    let r = roots[rest % roots.len()];
                    rest /= roots.len();
                    r
                })
                .collect();
            seeds.push(seed);
        }
    }
    let structured = seeds.len();
    let (lo, hi) = if roots.is_empty() {
        (-1.0, 1.0)
    } else {
        (roots[0] - 0.5, roots[roots.len() - 1] + 0.5)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    for _ in 0..config.random_seeds {
        seeds.push((0..n).map(|_| rng.gen_range(lo..hi)).collect());
    }

    let found: Vec<Vec<f64>> = seeds
        .into_iter()
        .filter_map(|s| newton(m, config.d, f, s, config.newton_tol, config.max_iter))
        .collect();
    let converged = found.len();
    let points = dedup_points(found, config.dedup_tol);
    let records = points
        .iter()
        .map(|v| stability(m, config.d, f, v, config.stab_tol))
        .collect::<Result<Vec<_>, _>>()?;
    let completeness_note = format!(
        "{} solutions from {} root-tuple seeds and {} random seeds ({} converged); \
         multistart enumeration is heuristic and only known complete near d -> 0",
        records.len(),
        structured,
        config.random_seeds,
        converged
    );
    Ok(SolutionSet {
        config: config.clone(),
        records,
        structured_seeds: structured,
        random_seeds: config.random_seeds,
        converged_runs: converged,
        completeness_note,
    })
}

/// `u_i = v[color(i)]`, after checking that the coloring is perfect for `m`.
pub fn lift_solution(
    coloring: &Coloring,
    m: &ColoringMatrix,
    v: &[f64],
) -> Result<ValueField, SolverError> {
    check_len(m, v)?;
    if let crate::coloring::PerfectCheck::Violated(w) = verify_perfect(coloring, m)? {
        return Err(SolverError::Unverified { vertex: w.vertex });
    }
    let values = coloring.colors().iter().map(|&c| v[c]).collect();
    Ok(ValueField::new(coloring.patch().clone(), values)?)
}

/// `(v_fine)_i = v_coarse[phi(i)]`.
pub fn lift_via_merger(v_coarse: &[f64], merger: &MergerMap) -> Result<Vec<f64>, SolverError> {
    if v_coarse.len() != merger.target_count() {
        return Err(SolverError::DimensionMismatch {
            expected: merger.target_count(),
            got: v_coarse.len(),
        });
    }
    Ok(merger.images().iter().map(|&t| v_coarse[t]).collect())
}

/// Classes of equal coordinates (within `tol`), numbered by first occurrence.
pub fn value_partition(v: &[f64], tol: f64) -> Vec<usize> {
    let mut reps: Vec<f64> = Vec::new();
    v.iter()
        .map(|&x| match reps.iter().position(|&r| fabs(r - x) <= tol) {
            Some(i) => i,
            None => {
                reps.push(x);
                reps.len() - 1
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub d: f64,
    pub count: usize,
    pub records: Vec<SolutionRecord>,
}

/// Bracket `[lo, hi]` of `d` across which the solution count changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountChange {
    pub lo: f64,
    pub hi: f64,
    pub count_lo: usize,
    pub count_hi: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub changes: Vec<CountChange>,
}

/// Runs [`solve_all`] for every `d` (sorted ascending) and brackets count
/// changes between neighbors. With `refine_width`, each bracket is bisected
/// until narrower than that width.
pub fn count_sweep(
    m: &ColoringMatrix,
    f: &Nonlinearity,
    d_values: &[f64],
    base: &SolverConfig,
    refine_width: Option<f64>,
) -> Result<Sweep, SolverError> {
    let mut ds = d_values.to_vec();
    ds.sort_by(f64::total_cmp);
    let count_at = |d: f64| -> Result<SolutionSet, SolverError> {
        let mut c = base.clone();
        c.d = d;
        solve_all(m, f, &c)
    };
    let mut points = Vec::with_capacity(ds.len());
    for &d in &ds {
        let set = count_at(d)?;
        points.push(SweepPoint {
            d,
            count: set.len(),
            records: set.records,
        });
    }
    let mut changes = Vec::new();
    for w in points.windows(2) {
        if w[0].count == w[1].count {
            continue;
        }
        let mut ch = CountChange {
            lo: w[0].d,
            hi: w[1].d,
            count_lo: w[0].count,
            count_hi: w[1].count,
        };
        if let Some(width) = refine_width {
            while ch.hi - ch.lo > width {
                let mid = 0.5 * (ch.lo + ch.hi);
                let c = count_at(mid)?.len();
                if c == ch.count_lo {
                    ch.lo = mid;
                } else {
                    ch.hi = mid;
                    ch.count_hi = c;
                }
            }
        }
        changes.push(ch);
    }
    Ok(Sweep { points, changes })
}
