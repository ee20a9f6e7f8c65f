//! Time evolution of `u_i' = d sum_{j in N(i)} (u_j - u_i) + f(u_i)` on a
//! patch. Non-interior vertices of open patches are held fixed.

mod tree;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use libm::{ceil, fabs};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloring::ValueField;
use crate::lattice::Patch;
use crate::solver::Nonlinearity;

pub use tree::{tree_counterexample, tree_spine_for_islands, TreeCounterexample};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("{0}")]
    BadParameter(&'static str),
    #[error("solution diverged at t = {time} (|u| > 1e6)")]
    Diverged { time: f64 },
    #[error("field is not stationary: residual {residual:e} exceeds {tolerance:e}")]
    NotStationary { residual: f64, tolerance: f64 },
    #[error("values a = {a}, b = {b}, c = 2b - a = {c} must be pairwise distinct")]
    DegenerateTriplet { a: f64, b: f64, c: f64 },
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
    #[error(transparent)]
    Coloring(#[from] crate::coloring::ColoringError),
    #[error(transparent)]
    Solver(#[from] crate::solver::SolverError),
}

const DIVERGENCE: f64 = 1e6;

/// Right-hand side at one vertex.
#[inline]
fn rate(patch: &Patch, u: &[f64], v: usize, d: f64, f: &Nonlinearity) -> f64 {
    let ui = u[v];
    let coupling: f64 = patch.adjacent(v).iter().map(|&w| u[w] - ui).sum();
    d * coupling + f.eval(ui)
}

/// Largest stationarity defect over interior vertices.
pub fn stationary_residual(field: &ValueField, d: f64, f: &Nonlinearity) -> f64 {
    let patch = field.patch();
    let u = field.values();
    patch
        .interior_vertices()
        .map(|v| fabs(rate(patch, u, v, d, f)))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStats {
    pub final_field: ValueField,
    /// Largest max-norm distance from the initial field over all steps.
    pub max_drift: f64,
    pub final_residual: f64,
    pub steps: usize,
    /// Step size actually used.
    pub dt: f64,
    pub min_value: f64,
    pub max_value: f64,
}

/// Step bound `1 / (4 d k + L_f)` with `L_f = max |f'|` over the data range.
pub fn stable_step(field: &ValueField, d: f64, f: &Nonlinearity) -> f64 {
    let (lo, hi) = field
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| {
            (l.min(x), h.max(x))
        });
    let lf = f.lipschitz_on(lo, hi);
    1.0 / (4.0 * d * field.patch().degree() as f64 + lf)
}

/// Classical fourth-order Runge-Kutta up to time `t_end`. The requested `dt`
/// is shrunk to the stability bound if needed and then adjusted so that an
/// integer number of steps lands on `t_end`.
pub fn integrate(
    field: &ValueField,
    d: f64,
    f: &Nonlinearity,
    t_end: f64,
    dt: f64,
) -> Result<TrajectoryStats, DynamicsError> {
    if !(dt > 0.0 && t_end > 0.0 && d >= 0.0) {
        return Err(DynamicsError::BadParameter(
            "dt, t_end must be positive and d nonnegative",
        ));
    }
    let dt = dt.min(stable_step(field, d, f));
    let steps = (ceil(t_end / dt) as usize).max(1);
    let h = t_end / steps as f64;

    let patch = field.patch().clone();
    let len = patch.len();
    let mask: Vec<bool> = patch.interior_mask().to_vec();
    let initial = field.values();
    let mut u = initial.to_vec();
    let mut k1 = vec![0.0; len];
    let mut k2 = vec![0.0; len];
    let mut k3 = vec![0.0; len];
    let mut k4 = vec![0.0; len];
    let mut tmp = vec![0.0; len];
    let eval = |u: &[f64], out: &mut [f64]| {
        for v in 0..len {
            out[v] = if mask[v] {
                rate(&patch, u, v, d, f)
            } else {
                0.0
            };
        }
    };
    let mut max_drift: f64 = 0.0;
    let (mut min_value, mut max_value) = initial
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| {
            (l.min(x), h.max(x))
        });
    for step in 0..steps {
        eval(&u, &mut k1);
        for v in 0..len {
            tmp[v] = u[v] + 0.5 * h * k1[v];
        }
        eval(&tmp, &mut k2);
        for v in 0..len {
            tmp[v] = u[v] + 0.5 * h * k2[v];
        }
        eval(&tmp, &mut k3);
        for v in 0..len {
            tmp[v] = u[v] + h * k3[v];
        }
        eval(&tmp, &mut k4);
        let mut drift: f64 = 0.0;
        for v in 0..len {
            u[v] += h / 6.0 * (k1[v] + 2.0 * k2[v] + 2.0 * k3[v] + k4[v]);
            let x = u[v];
            if !(fabs(x) <= DIVERGENCE) {
                return Err(DynamicsError::Diverged {
                    time: (step + 1) as f64 * h,
                });
            }
            drift = drift.max(fabs(x - initial[v]));
            min_value = min_value.min(x);
            max_value = max_value.max(x);
        }
        max_drift = max_drift.max(drift);
    }
    let final_field = ValueField::new(patch.clone(), u)?;
    let final_residual = stationary_residual(&final_field, d, f);
    Ok(TrajectoryStats {
        final_field,
        max_drift,
        final_residual,
        steps,
        dt: h,
        min_value,
        max_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelaxVerdict {
    Returned,
    Escaped,
    Inconclusive,
}

impl RelaxVerdict {
    pub fn name(self) -> &'static str {
        match self {
            RelaxVerdict::Returned => "returned",
            RelaxVerdict::Escaped => "escaped",
            RelaxVerdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for RelaxVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxOptions {
    /// Perturbation amplitude.
    pub epsilon: f64,
    pub trials: usize,
    pub t_end: f64,
    pub dt: f64,
    pub seed: u64,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        RelaxOptions {
            epsilon: 1e-3,
            trials: 4,
            t_end: 100.0,
            dt: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxOutcome {
    pub verdict: RelaxVerdict,
    /// Largest final max-norm distance from the stationary field over trials.
    pub max_final_distance: f64,
    pub trials_run: usize,
}

const ESCAPE_RADIUS: f64 = 0.1;

/// Perturbs every interior vertex of a stationary field uniformly in
/// `[-epsilon, epsilon]` and integrates.
///
/// `Escaped` as soon as one trial ends outside the 0.1 ball; `Returned` when
/// every trial ends within `10 epsilon` with a smaller residual than it
/// started with; otherwise `Inconclusive`.
pub fn perturb_relax(
    field: &ValueField,
    d: f64,
    f: &Nonlinearity,
    options: RelaxOptions,
) -> Result<RelaxOutcome, DynamicsError> {
    let base_residual = stationary_residual(field, d, f);
    if base_residual > 1e-8 {
        return Err(DynamicsError::NotStationary {
            residual: base_residual,
            tolerance: 1e-8,
        });
    }
    if !(options.epsilon > 0.0) || options.trials == 0 {
        return Err(DynamicsError::BadParameter(
            "epsilon and trials must be positive",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let patch = field.patch();
    let mut all_returned = true;
    let mut worst: f64 = 0.0;
    for trial in 0..options.trials {
        let mut start = field.clone();
        for v in 0..patch.len() {
            if patch.is_interior(v) {
                start.values_mut()[v] += rng.gen_range(-options.epsilon..=options.epsilon);
            }
        }
        let start_residual = stationary_residual(&start, d, f);
        let stats = match integrate(&start, d, f, options.t_end, options.dt) {
            Ok(s) => s,
            Err(DynamicsError::Diverged { .. }) => {
                return Ok(RelaxOutcome {
                    verdict: RelaxVerdict::Escaped,
                    max_final_distance: f64::INFINITY,
                    trials_run: trial + 1,
                })
            }
            Err(e) => return Err(e),
        };
        let dist = stats
            .final_field
            .values()
            .iter()
            .zip(field.values())
            .map(|(a, b)| fabs(a - b))
            .fold(0.0, f64::max);
        worst = worst.max(dist);
        if dist > ESCAPE_RADIUS {
            return Ok(RelaxOutcome {
                verdict: RelaxVerdict::Escaped,
                max_final_distance: worst,
                trials_run: trial + 1,
            });
        }
        if dist > 10.0 * options.epsilon || stats.final_residual >= start_residual {
            all_returned = false;
        }
    }
    Ok(RelaxOutcome {
        verdict: if all_returned {
            RelaxVerdict::Returned
        } else {
            RelaxVerdict::Inconclusive
        },
        max_final_distance: worst,
        trials_run: options.trials,
    })
}
