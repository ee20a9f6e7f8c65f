//! A stationary solution on the binary tree with three values that is not
//! carried by any perfect coloring with finitely many colors.
//!
//! Along the spine, `a` sits at positions `+-n(n+9)/2`, `b` next to each `a`,
//! and `c` fills the islands in between, whose lengths grow as 2, 3, 4, ...
//! With `d = 1` and `c = 2b - a`, each value admits exactly two neighbor
//! multisets with the right sum:
//!
//! | value | preferred   | alternative |
//! |-------|-------------|-------------|
//! | a     | `{a, b, b}` | `{a, a, c}` |
//! | b     | `{a, c, c}` | `{b, b, c}` |
//! | c     | `{b, b, c}` | `{a, c, c}` |
//!
//! Every vertex is completed from the first multiset that contains the values
//! already fixed around it (its two spine neighbors, or its parent).

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::DynamicsError;
use crate::coloring::ValueField;
use crate::lattice::{Extents, Patch, Wrap};
use crate::solver::Nonlinearity;

const A: u8 = 0;
const B: u8 = 1;
const C: u8 = 2;

const RULES: [[[u8; 3]; 2]; 3] = [
    [[A, B, B], [A, A, C]],
    [[A, C, C], [B, B, C]],
    [[B, B, C], [A, C, C]],
];

#[derive(Debug, Clone, PartialEq)]
pub struct TreeCounterexample {
    pub patch: Arc<Patch>,
    pub field: ValueField,
    /// `(a, b, c)`.
    pub values: [f64; 3],
    /// `(f(a), f(b), f(c))`.
    pub f_values: [f64; 3],
    /// Quadratic through the three point-value pairs.
    pub f: Nonlinearity,
    /// Value index (0 = a, 1 = b, 2 = c) per vertex.
    pub labels: Vec<u8>,
}

/// Spine label at position `i`.
fn spine_label(i: i64) -> u8 {
    let i = i.abs();
    let mut n = 0i64;
    loop {
        let p = n * (n + 9) / 2;
        if p == i {
            return A;
        }
        if p - 1 == i || p + 1 == i {
            return B;
        }
        if p - 1 > i {
            return C;
        }
        n += 1;
    }
}

/// Spine half-length whose interior shows every island of length up to
/// `max_island` (at least 2).
pub fn tree_spine_for_islands(max_island: usize) -> usize {
    let n = max_island.max(2) as i64 - 1;
    (n * (n + 9) / 2 + 2) as usize
}

/// Removes `known` from the first allowed multiset around `label` that holds
/// all of them and returns what is left.
fn complete(label: u8, known: &[u8]) -> Vec<u8> {
    for rule in &RULES[label as usize] {
        let mut rest = rule.to_vec();
        let fits = known
            .iter()
            .all(|k| match rest.iter().position(|r| r == k) {
                Some(i) => {
                    rest.remove(i);
                    true
                }
                None => false,
            });
        if fits {
            return rest;
        }
    }
    unreachable!("neighbor values {known:?} do not fit label {label}")
}

/// Builds the example on a tree with spine `-spine..=spine` and `depth`
/// levels below each spine vertex.
pub fn tree_counterexample(
    a: f64,
    b: f64,
    spine: usize,
    depth: usize,
) -> Result<TreeCounterexample, DynamicsError> {
    let c = 2.0 * b - a;
    if a == b || b == c || a == c || !(a.is_finite() && b.is_finite()) {
        return Err(DynamicsError::DegenerateTriplet { a, b, c });
    }
    if depth < 2 {
        return Err(DynamicsError::BadParameter("tree depth must be at least 2"));
    }
    let patch = Arc::new(Patch::new(
        crate::lattice::GridKind::BinaryTree,
        Extents::Tree { spine, depth },
        Wrap::NONE,
    )?);
    let mut labels = vec![u8::MAX; patch.len()];
    let s = spine as i64;
    let block = 1usize << depth;
    for pos in -s..=s {
        let root = patch.index(pos, 0).expect("spine vertex");
        let own = spine_label(pos);
        labels[root] = own;
        let child_label = complete(own, &[spine_label(pos - 1), spine_label(pos + 1)])[0];
        labels[patch.index(pos, 1).expect("child")] = child_label;
        for h in 1..block / 2 {
            let v = patch.index(pos, h as i64).expect("heap index");
            let parent = if h == 1 {
                own
            } else {
                labels[patch.index(pos, (h / 2) as i64).unwrap()]
            };
            let kids = complete(labels[v], &[parent]);
            labels[patch.index(pos, 2 * h as i64).unwrap()] = kids[0];
            labels[patch.index(pos, 2 * h as i64 + 1).unwrap()] = kids[1];
        }
    }
    let values = [a, b, c];
    let f_values = [2.0 * a - 2.0 * b, 3.0 * b - a - 2.0 * c, 2.0 * c - 2.0 * b];
    let f = Nonlinearity::polynomial(interpolate(values, f_values))?;
    let field = ValueField::new(
        patch.clone(),
        labels.iter().map(|&l| values[l as usize]).collect(),
    )?;
    Ok(TreeCounterexample {
        patch,
        field,
        values,
        f_values,
        f,
        labels,
    })
}

/// Ascending coefficients of the Lagrange quadratic through `(x_i, y_i)`.
fn interpolate(x: [f64; 3], y: [f64; 3]) -> Vec<f64> {
    let mut out = vec![0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let w = y[i] / ((x[i] - x[j]) * (x[i] - x[k]));
        out[0] += w * x[j] * x[k];
        out[1] -= w * (x[j] + x[k]);
        out[2] += w;
    }
    out
}
