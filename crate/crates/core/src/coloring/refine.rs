//! Coarsest equitable refinement of a vertex partition.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{Coloring, ColoringMatrix, ValueField};
use crate::lattice::Patch;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementResult {
    /// Class per vertex, numbered by first occurrence in vertex order.
    pub partition: Vec<usize>,
    pub class_count: usize,
    /// Classes that contain at least one interior vertex.
    pub interior_class_count: usize,
    /// Induced matrix; present when every vertex is interior.
    pub induced_matrix: Option<ColoringMatrix>,
    pub stabilized: bool,
    pub rounds: usize,
}

impl RefinementResult {
    pub fn to_coloring(&self, patch: alloc::sync::Arc<Patch>) -> Coloring {
        Coloring::new(patch, self.partition.clone(), self.class_count.max(1))
            .expect("partition labels are dense")
    }
}

pub fn refine_coloring(coloring: &Coloring) -> RefinementResult {
    refine_partition(coloring.patch(), coloring.colors())
}

pub fn refine_field(field: &ValueField, tol: f64) -> RefinementResult {
    let (labels, _) = field.value_classes(tol);
    refine_partition(field.patch(), &labels)
}

/// Splits the classes of `initial` by neighbor-class multisets until nothing
/// changes.
///
/// Interior vertices are split by their own class plus the sorted classes of
/// their neighbors. Non-interior vertices keep one frozen class per initial
/// label: they take part in the signatures of their neighbors but never split
/// and never share a class with interior vertices.
pub fn refine_partition(patch: &Patch, initial: &[usize]) -> RefinementResult {
    assert_eq!(initial.len(), patch.len());
    let len = patch.len();
    let mut labels = relabel((0..len).map(|v| (patch.is_interior(v), initial[v])), len);
    let mut count = labels.iter().max().map_or(0, |m| m + 1);
    let mut rounds = 0;
    let mut neighbor_buf: Vec<usize> = Vec::new();
    let stabilized = loop {
        rounds += 1;
        let mut table: BTreeMap<(bool, usize, Vec<usize>), usize> = BTreeMap::new();
        let mut next = vec![0; len];
        for v in 0..len {
            neighbor_buf.clear();
            let interior = patch.is_interior(v);
            if interior {
                neighbor_buf.extend(patch.adjacent(v).iter().map(|&w| labels[w]));
                neighbor_buf.sort_unstable();
            }
            let key = (interior, labels[v], neighbor_buf.clone());
            let fresh = table.len();
            next[v] = *table.entry(key).or_insert(fresh);
        }
        let next_count = table.len();
        labels = next;
        if next_count == count {
            break true;
        }
        count = next_count;
        if rounds > len + 1 {
            break false;
        }
    };

    let interior_class_count = {
        let mut seen = vec![false; count];
        for v in patch.interior_vertices() {
            seen[labels[v]] = true;
        }
        seen.iter().filter(|&&s| s).count()
    };
    let induced_matrix = if (0..len).all(|v| patch.is_interior(v)) && len > 0 {
        let mut rows = vec![Vec::new(); count];
        for v in 0..len {
            let class = labels[v];
            if rows[class].is_empty() {
                let mut counts = vec![0u32; count];
                for &w in patch.adjacent(v) {
                    counts[labels[w]] += 1;
                }
                rows[class] = counts;
            }
        }
        ColoringMatrix::new(patch.degree(), &rows).ok()
    } else {
        None
    };
    RefinementResult {
        partition: labels,
        class_count: count,
        interior_class_count,
        induced_matrix,
        stabilized,
        rounds,
    }
}

/// Dense labels by first occurrence of each key.
fn relabel<K: Ord>(keys: impl Iterator<Item = K>, len: usize) -> Vec<usize> {
    let mut table = BTreeMap::new();
    let mut out = Vec::with_capacity(len);
    for key in keys {
        let fresh = table.len();
        out.push(*table.entry(key).or_insert(fresh));
    }
    out
}
