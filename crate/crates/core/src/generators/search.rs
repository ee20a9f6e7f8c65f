use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::GeneratorError;
use crate::coloring::{canonical_under, Coloring, ColoringError, ColoringMatrix};
use crate::lattice::{GridKind, Patch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Stop after this many inequivalent colorings.
    pub limit: usize,
    /// Also identify colorings related by the eight point symmetries of a
    /// square torus with equal sides.
    pub point_symmetries: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            limit: 1000,
            point_symmetries: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Canonical representatives, sorted.
    pub colorings: Vec<Coloring>,
    /// More colorings exist than `limit`.
    pub truncated: bool,
    /// Search tree nodes visited.
    pub nodes: u64,
}

/// Vertex permutations for the point group of a square `w x w` torus.
pub fn point_symmetries(patch: &Patch) -> Option<Vec<Vec<usize>>> {
    let (w, h) = patch.plane_size()?;
    if patch.kind() != GridKind::Square || w != h || !patch.is_fully_wrapped() {
        return None;
    }
    const MAPS: [[i64; 4]; 8] = [
        [1, 0, 0, 1],
        [0, -1, 1, 0],
        [-1, 0, 0, -1],
        [0, 1, -1, 0],
        [-1, 0, 0, 1],
        [1, 0, 0, -1],
        [0, 1, 1, 0],
        [0, -1, -1, 0],
    ];
    Some(
        MAPS.iter()
            .map(|[a, b, c, d]| {
                (0..patch.len())
                    .map(|v| {
                        let (x, y) = patch.coord(v);
                        patch.index(a * x + b * y, c * x + d * y).expect("wrapped")
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Exhaustive backtracking for `matrix`-perfect colorings of a torus that use
/// every color, reported once per translation class.
///
/// Vertices are colored in index order, colors tried in ascending order. Each
/// vertex keeps a bitmask of colors still possible given the neighbor counts
/// seen so far; a branch dies as soon as a count exceeds the matrix row of an
/// assigned vertex or a domain empties.
pub fn torus_search(
    patch: Arc<Patch>,
    matrix: &ColoringMatrix,
    options: SearchOptions,
) -> Result<SearchResult, GeneratorError> {
    if !patch.is_fully_wrapped() || patch.plane_size().is_none() {
        return Err(GeneratorError::NotWrapped);
    }
    if patch.degree() != matrix.k() {
        return Err(ColoringError::DegreeMismatch {
            patch: patch.degree(),
            matrix: matrix.k(),
        }
        .into());
    }
    let n = matrix.n();
    if n > 64 {
        return Err(GeneratorError::TooManyColors);
    }
    let translations = patch.translations()?;
    let group = match (options.point_symmetries, point_symmetries(&patch)) {
        (true, Some(points)) => points
            .iter()
            .flat_map(|p| {
                translations
                    .iter()
                    .map(move |t| t.iter().map(|&v| p[v]).collect::<Vec<_>>())
            })
            .collect(),
        _ => translations,
    };

    let mut state = Search {
        patch: &patch,
        matrix,
        n,
        colors: vec![usize::MAX; patch.len()],
        counts: vec![0; patch.len() * n],
        group: &group,
        found: BTreeSet::new(),
        limit: options.limit,
        truncated: false,
        nodes: 0,
    };
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let domains = vec![full; patch.len()];
    state.descend(0, domains);

    let Search {
        found,
        truncated,
        nodes,
        ..
    } = state;
    let colorings = found
        .into_iter()
        .map(|c| Coloring::new(patch.clone(), c, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SearchResult {
        colorings,
        truncated,
        nodes,
    })
}

struct Search<'a> {
    patch: &'a Patch,
    matrix: &'a ColoringMatrix,
    n: usize,
    colors: Vec<usize>,
    counts: Vec<u32>,
    group: &'a [Vec<usize>],
    found: BTreeSet<Vec<usize>>,
    limit: usize,
    truncated: bool,
    nodes: u64,
}

impl Search<'_> {
    /// Returns false once the search should stop.
    fn descend(&mut self, v: usize, domains: Vec<u64>) -> bool {
        self.nodes += 1;
        if v == self.colors.len() {
            return self.record();
        }
        let mut options = domains[v];
        while options != 0 {
            let a = options.trailing_zeros() as usize;
            options &= options - 1;
            let mut next = domains.clone();
            if self.assign(v, a, &mut next) && !self.descend(v + 1, next) {
                self.unassign(v, a);
                return false;
            }
            self.unassign(v, a);
        }
        true
    }

    fn assign(&mut self, v: usize, a: usize, domains: &mut [u64]) -> bool {
        let n = self.n;
        self.colors[v] = a;
        domains[v] = 1 << a;
        for &w in self.patch.adjacent(v) {
            self.counts[w * n + a] += 1;
        }
        for &w in self.patch.adjacent(v) {
            let seen = self.counts[w * n + a];
            let b = self.colors[w];
            if b != usize::MAX {
                if seen > self.matrix.get(b, a) {
                    return false;
                }
            } else {
                let mut dom = domains[w];
                let mut bits = dom;
                while bits != 0 {
                    let c = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if seen > self.matrix.get(c, a) {
                        dom &= !(1 << c);
                    }
                }
                if dom == 0 {
                    return false;
                }
                domains[w] = dom;
            }
        }
        true
    }

    fn unassign(&mut self, v: usize, a: usize) {
        for &w in self.patch.adjacent(v) {
            self.counts[w * self.n + a] -= 1;
        }
        self.colors[v] = usize::MAX;
    }

    fn record(&mut self) -> bool {
        let mut used = vec![false; self.n];
        for &c in &self.colors {
            used[c] = true;
        }
        if used.iter().any(|u| !u) {
            return true;
        }
        let canon = canonical_under(&self.colors, self.group);
        if self.found.contains(&canon) {
            return true;
        }
        if self.found.len() == self.limit {
            self.truncated = true;
            return false;
        }
        self.found.insert(canon);
        true
    }
}
