//! Finite realizations of the regular graphs: rings/paths, square, triangular
//! and hexagonal grids, and truncated bi-infinite binary trees.
//!
//! Planar grids use integer coordinates `(x, y)` with vertex index
//! `y * width + x`. Neighbor lists follow a fixed offset order:
//!
//! | grid       | offsets (in order)                                   |
//! |------------|------------------------------------------------------|
//! | path       | `+1`, `-1`                                           |
//! | square     | `(+1,0)`, `(-1,0)`, `(0,+1)`, `(0,-1)`               |
//! | triangular | square offsets, then `(+1,+1)`, `(-1,-1)`            |
//! | hexagonal  | `(+1,0)`, `(-1,0)`, then `(0,+1)` if `x+y` is even, else `(0,-1)` |
//!
//! The hexagonal grid is the brick-wall embedding, which puts a vertex on every
//! integer point. On open windows neighbors that fall outside are dropped and the
//! vertex is marked non-interior; on wrapped axes coordinates are reduced modulo
//! the extent, so tiny tori may list the same neighbor more than once.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// The five graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GridKind {
    Path,
    Square,
    Triangular,
    Hexagonal,
    BinaryTree,
}

impl GridKind {
    pub const ALL: [GridKind; 5] = [
        GridKind::Path,
        GridKind::Square,
        GridKind::Triangular,
        GridKind::Hexagonal,
        GridKind::BinaryTree,
    ];

    /// Vertex degree `k` of the infinite graph.
    pub const fn degree(self) -> usize {
        match self {
            GridKind::Path => 2,
            GridKind::Square => 4,
            GridKind::Triangular => 6,
            GridKind::Hexagonal | GridKind::BinaryTree => 3,
        }
    }

    pub const fn is_planar(self) -> bool {
        matches!(
            self,
            GridKind::Square | GridKind::Triangular | GridKind::Hexagonal
        )
    }

    pub const fn name(self) -> &'static str {
        match self {
            GridKind::Path => "path",
            GridKind::Square => "square",
            GridKind::Triangular => "triangular",
            GridKind::Hexagonal => "hexagonal",
            GridKind::BinaryTree => "binary_tree",
        }
    }
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GridKind {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "path" | "ring" => Ok(GridKind::Path),
            "square" => Ok(GridKind::Square),
            "triangular" => Ok(GridKind::Triangular),
            "hexagonal" => Ok(GridKind::Hexagonal),
            "binary_tree" | "tree" => Ok(GridKind::BinaryTree),
            other => Err(LatticeError::UnknownKind(String::from(other))),
        }
    }
}

/// Size of a finite patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extents {
    /// Path or ring of `len` vertices.
    Line(usize),
    /// Planar window or torus.
    Plane { width: usize, height: usize },
    /// Spine positions `-spine..=spine`, each carrying an off-spine subtree with
    /// `depth` levels.
    Tree { spine: usize, depth: usize },
}

impl Extents {
    pub fn to_vec(self) -> Vec<usize> {
        match self {
            Extents::Line(len) => vec![len],
            Extents::Plane { width, height } => vec![width, height],
            Extents::Tree { spine, depth } => vec![spine, depth],
        }
    }

    /// Builds extents for `kind` from a flat list as used in file formats.
    pub fn from_slice(kind: GridKind, dims: &[usize]) -> Result<Self, LatticeError> {
        match (kind, dims) {
            (GridKind::Path, [len]) => Ok(Extents::Line(*len)),
            (GridKind::BinaryTree, [spine, depth]) => Ok(Extents::Tree {
                spine: *spine,
                depth: *depth,
            }),
            (k, [width, height]) if k.is_planar() => Ok(Extents::Plane {
                width: *width,
                height: *height,
            }),
            _ => Err(LatticeError::ExtentsMismatch(kind)),
        }
    }
}

/// Per-axis wraparound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Wrap {
    pub x: bool,
    pub y: bool,
}

impl Wrap {
    pub const NONE: Wrap = Wrap { x: false, y: false };
    pub const BOTH: Wrap = Wrap { x: true, y: true };
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("unknown grid kind `{0}`")]
    UnknownKind(String),
    #[error("extents do not match grid kind {0}")]
    ExtentsMismatch(GridKind),
    #[error("extents must be positive")]
    ZeroExtent,
    #[error("wrapped hexagonal patches need even extents, got {width}x{height}")]
    OddHexagonalExtent { width: usize, height: usize },
    #[error("binary tree patches cannot wrap")]
    TreeWrap,
    #[error("vertex {vertex} out of range for a patch of {len} vertices")]
    VertexOutOfRange { vertex: usize, len: usize },
    #[error("translations need a fully wrapped patch")]
    NotWrapped,
    #[error("shift has {got} components, patch needs {expected}")]
    ShiftDimension { expected: usize, got: usize },
    #[error("hexagonal translations need even shift components")]
    HexagonalShiftParity,
}

/// Two integer vectors spanning a period lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeriodVectors {
    pub v1: [i64; 2],
    pub v2: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error("period vectors must be nonzero and linearly independent")]
    Dependent,
    #[error("hexagonal period vectors need all coordinates even")]
    HexagonalParity,
    #[error("period vectors only make sense on planar grids, not {0}")]
    NotPlanar(GridKind),
}

impl PeriodVectors {
    pub fn new(v1: [i64; 2], v2: [i64; 2]) -> Result<Self, PeriodError> {
        let p = PeriodVectors { v1, v2 };
        if p.determinant() == 0 {
            return Err(PeriodError::Dependent);
        }
        Ok(p)
    }

    /// Checks the extra constraints `kind` puts on periods.
    pub fn for_kind(v1: [i64; 2], v2: [i64; 2], kind: GridKind) -> Result<Self, PeriodError> {
        if !kind.is_planar() {
            return Err(PeriodError::NotPlanar(kind));
        }
        let p = Self::new(v1, v2)?;
        if kind == GridKind::Hexagonal && [v1[0], v1[1], v2[0], v2[1]].iter().any(|c| c % 2 != 0) {
            return Err(PeriodError::HexagonalParity);
        }
        Ok(p)
    }

    /// Signed determinant of the matrix with columns `v1`, `v2`.
    pub fn determinant(&self) -> i64 {
        self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0]
    }

    /// Index of the period lattice in `Z^2`.
    pub fn index(&self) -> u64 {
        self.determinant().unsigned_abs()
    }
}

/// A finite patch of one of the five graph families.
///
/// Immutable after construction. Neighbor lists are stored in compressed
/// row form and keep multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Patch {
    kind: GridKind,
    extents: Extents,
    wrap: Wrap,
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
    interior: Vec<bool>,
}

impl Patch {
    pub fn new(kind: GridKind, extents: Extents, wrap: Wrap) -> Result<Self, LatticeError> {
        match (kind, extents) {
            (GridKind::Path, Extents::Line(len)) => {
                if len == 0 {
                    return Err(LatticeError::ZeroExtent);
                }
                Ok(Self::planar(
                    kind,
                    extents,
                    Wrap {
                        x: wrap.x,
                        y: false,
                    },
                    len,
                    1,
                ))
            }
            (k, Extents::Plane { width, height }) if k.is_planar() => {
                if width == 0 || height == 0 {
                    return Err(LatticeError::ZeroExtent);
                }
                if k == GridKind::Hexagonal
                    && ((wrap.x && width % 2 != 0) || (wrap.y && height % 2 != 0))
                {
                    return Err(LatticeError::OddHexagonalExtent { width, height });
                }
                Ok(Self::planar(kind, extents, wrap, width, height))
            }
            (GridKind::BinaryTree, Extents::Tree { spine, depth }) => {
                if depth == 0 {
                    return Err(LatticeError::ZeroExtent);
                }
                if wrap.x || wrap.y {
                    return Err(LatticeError::TreeWrap);
                }
                Ok(Self::tree(spine, depth))
            }
            _ => Err(LatticeError::ExtentsMismatch(kind)),
        }
    }

    /// Fully wrapped planar torus (or ring for [`GridKind::Path`], ignoring `height`).
    pub fn torus(kind: GridKind, width: usize, height: usize) -> Result<Self, LatticeError> {
        let extents = if kind == GridKind::Path {
            Extents::Line(width)
        } else {
            Extents::Plane { width, height }
        };
        Self::new(kind, extents, Wrap::BOTH)
    }

    pub fn ring(len: usize) -> Result<Self, LatticeError> {
        Self::new(GridKind::Path, Extents::Line(len), Wrap::BOTH)
    }

    fn planar(kind: GridKind, extents: Extents, wrap: Wrap, width: usize, height: usize) -> Self {
        let n = width * height;
        let k = kind.degree();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut adjacency = Vec::with_capacity(n * k);
        let mut interior = Vec::with_capacity(n);
        offsets.push(0);
        let mut deltas: Vec<(i64, i64)> = Vec::with_capacity(k);
        for y in 0..height {
            for x in 0..width {
                deltas.clear();
                match kind {
                    GridKind::Path => deltas.extend_from_slice(&[(1, 0), (-1, 0)]),
                    GridKind::Square => {
                        deltas.extend_from_slice(&[(1, 0), (-1, 0), (0, 1), (0, -1)])
                    }
                    GridKind::Triangular => deltas.extend_from_slice(&[
                        (1, 0),
                        (-1, 0),
                        (0, 1),
                        (0, -1),
                        (1, 1),
                        (-1, -1),
                    ]),
                    GridKind::Hexagonal => {
                        deltas.extend_from_slice(&[(1, 0), (-1, 0)]);
                        deltas.push(if (x + y) % 2 == 0 { (0, 1) } else { (0, -1) });
                    }
                    GridKind::BinaryTree => unreachable!(),
                }
                let before = adjacency.len();
                for &(dx, dy) in &deltas {
                    let nx = reduce(x as i64 + dx, width, wrap.x);
                    let ny = reduce(y as i64 + dy, height, wrap.y);
                    if let (Some(nx), Some(ny)) = (nx, ny) {
                        adjacency.push(ny * width + nx);
                    }
                }
                interior.push(adjacency.len() - before == k);
                offsets.push(adjacency.len());
            }
        }
        Patch {
            kind,
            extents,
            wrap,
            offsets,
            adjacency,
            interior,
        }
    }

    fn tree(spine: usize, depth: usize) -> Self {
        let block = 1usize << depth;
        let spine_len = 2 * spine + 1;
        let n = spine_len * block;
        let mut offsets = Vec::with_capacity(n + 1);
        let mut adjacency = Vec::with_capacity(n * 3);
        let mut interior = Vec::with_capacity(n);
        offsets.push(0);
        for s in 0..spine_len {
            let base = s * block;
            // spine vertex: next, previous, off-spine child
            let before = adjacency.len();
            if s + 1 < spine_len {
                adjacency.push(base + block);
            }
            if s > 0 {
                adjacency.push(base - block);
            }
            adjacency.push(base + 1);
            interior.push(adjacency.len() - before == 3);
            offsets.push(adjacency.len());
            // off-spine heap nodes 1..block: parent, children
            for h in 1..block {
                let parent = if h == 1 { base } else { base + h / 2 };
                adjacency.push(parent);
                let leaf = 2 * h >= block;
                if !leaf {
                    adjacency.push(base + 2 * h);
                    adjacency.push(base + 2 * h + 1);
                }
                interior.push(!leaf);
                offsets.push(adjacency.len());
            }
        }
        Patch {
            kind: GridKind::BinaryTree,
            extents: Extents::Tree { spine, depth },
            wrap: Wrap::NONE,
            offsets,
            adjacency,
            interior,
        }
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn extents(&self) -> Extents {
        self.extents
    }

    pub fn wrap(&self) -> Wrap {
        self.wrap
    }

    pub fn degree(&self) -> usize {
        self.kind.degree()
    }

    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }

    /// True when every axis wraps (rings and tori).
    pub fn is_fully_wrapped(&self) -> bool {
        match self.extents {
            Extents::Line(_) => self.wrap.x,
            Extents::Plane { .. } => self.wrap.x && self.wrap.y,
            Extents::Tree { .. } => false,
        }
    }

    /// `(width, height)` of the coordinate box; paths have height 1.
    pub fn plane_size(&self) -> Option<(usize, usize)> {
        match self.extents {
            Extents::Line(len) => Some((len, 1)),
            Extents::Plane { width, height } => Some((width, height)),
            Extents::Tree { .. } => None,
        }
    }

    pub fn neighbors(&self, vertex: usize) -> Result<&[usize], LatticeError> {
        if vertex >= self.len() {
            return Err(LatticeError::VertexOutOfRange {
                vertex,
                len: self.len(),
            });
        }
        Ok(self.adjacent(vertex))
    }

    /// Neighbor list without the range check. Panics on a bad index.
    #[inline]
    pub fn adjacent(&self, vertex: usize) -> &[usize] {
        &self.adjacency[self.offsets[vertex]..self.offsets[vertex + 1]]
    }

    #[inline]
    pub fn is_interior(&self, vertex: usize) -> bool {
        self.interior[vertex]
    }

    pub fn interior_mask(&self) -> &[bool] {
        &self.interior
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.interior
            .iter()
            .enumerate()
            .filter_map(|(v, &inside)| inside.then_some(v))
    }

    /// Coordinates of `vertex`: `(x, y)` for planar grids, `(x, 0)` for paths
    /// and `(spine position, heap index)` for trees, where heap index 0 is the
    /// spine vertex itself and `h` has children `2h`, `2h+1`.
    pub fn coord(&self, vertex: usize) -> (i64, i64) {
        match self.extents {
            Extents::Line(_) => (vertex as i64, 0),
            Extents::Plane { width, .. } => ((vertex % width) as i64, (vertex / width) as i64),
            Extents::Tree { spine, depth } => {
                let block = 1usize << depth;
                (
                    (vertex / block) as i64 - spine as i64,
                    (vertex % block) as i64,
                )
            }
        }
    }

    /// Inverse of [`Patch::coord`] on wrapped axes; `None` outside open axes.
    pub fn index(&self, x: i64, y: i64) -> Option<usize> {
        match self.extents {
            Extents::Line(len) => {
                let x = reduce(x, len, self.wrap.x)?;
                Some(x)
            }
            Extents::Plane { width, height } => {
                let x = reduce(x, width, self.wrap.x)?;
                let y = reduce(y, height, self.wrap.y)?;
                Some(y * width + x)
            }
            Extents::Tree { spine, depth } => {
                let block = 1i64 << depth;
                if x.unsigned_abs() as usize > spine || !(0..block).contains(&y) {
                    return None;
                }
                Some(((x + spine as i64) * block + y) as usize)
            }
        }
    }

    /// Vertex permutation induced by translating every coordinate by `shift`.
    pub fn translate(&self, shift: &[i64]) -> Result<Vec<usize>, LatticeError> {
        if !self.is_fully_wrapped() {
            return Err(LatticeError::NotWrapped);
        }
        let dims = match self.extents {
            Extents::Line(_) => 1,
            _ => 2,
        };
        if shift.len() != dims {
            return Err(LatticeError::ShiftDimension {
                expected: dims,
                got: shift.len(),
            });
        }
        let (dx, dy) = (shift[0], if dims == 2 { shift[1] } else { 0 });
        if self.kind == GridKind::Hexagonal && (dx % 2 != 0 || dy % 2 != 0) {
            return Err(LatticeError::HexagonalShiftParity);
        }
        Ok((0..self.len())
            .map(|v| {
                let (x, y) = self.coord(v);
                self.index(x + dx, y + dy).expect("wrapped axes")
            })
            .collect())
    }

    /// All translation automorphisms of a fully wrapped patch, identity first.
    /// Hexagonal tori only admit even shifts.
    pub fn translations(&self) -> Result<Vec<Vec<usize>>, LatticeError> {
        let (width, height) = self.plane_size().ok_or(LatticeError::NotWrapped)?;
        if !self.is_fully_wrapped() {
            return Err(LatticeError::NotWrapped);
        }
        let step = if self.kind == GridKind::Hexagonal {
            2
        } else {
            1
        };
        let mut out = Vec::new();
        for dy in (0..height).step_by(step) {
            for dx in (0..width).step_by(step) {
                let shift: &[i64] = if self.kind == GridKind::Path {
                    &[dx as i64]
                } else {
                    &[dx as i64, dy as i64]
                };
                out.push(self.translate(shift)?);
            }
        }
        Ok(out)
    }
}

fn reduce(c: i64, extent: usize, wrap: bool) -> Option<usize> {
    let e = extent as i64;
    if wrap {
        Some(c.rem_euclid(e) as usize)
    } else if (0..e).contains(&c) {
        Some(c as usize)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn square_torus_is_four_regular() {
        let p = Patch::torus(GridKind::Square, 4, 4).unwrap();
        assert_eq!(p.len(), 16);
        assert!((0..16).all(|v| p.adjacent(v).len() == 4 && p.is_interior(v)));
    }

    #[test]
    fn ring_of_six() {
        let p = Patch::ring(6).unwrap();
        assert_eq!(p.len(), 6);
        assert!((0..6).all(|v| p.adjacent(v).len() == 2 && p.is_interior(v)));
        assert_eq!(p.neighbors(0).unwrap(), &[1, 5]);
    }

    #[test]
    fn triangular_torus_has_six_distinct_neighbors() {
        let p = Patch::torus(GridKind::Triangular, 5, 5).unwrap();
        for v in 0..p.len() {
            let set: BTreeSet<_> = p.adjacent(v).iter().copied().collect();
            assert_eq!(set.len(), 6, "vertex {v}");
            assert!(!set.contains(&v));
        }
    }

    #[test]
    fn square_origin_neighbors_in_offset_order() {
        let p = Patch::torus(GridKind::Square, 4, 4).unwrap();
        let got: Vec<_> = p
            .neighbors(0)
            .unwrap()
            .iter()
            .map(|&v| p.coord(v))
            .collect();
        assert_eq!(got, vec![(1, 0), (3, 0), (0, 1), (0, 3)]);
    }

    #[test]
    fn hexagonal_brick_wall_origin() {
        let p = Patch::torus(GridKind::Hexagonal, 4, 4).unwrap();
        let got: Vec<_> = p
            .neighbors(0)
            .unwrap()
            .iter()
            .map(|&v| p.coord(v))
            .collect();
        assert_eq!(got, vec![(1, 0), (3, 0), (0, 1)]);
        // odd parity vertex links downwards
        let v = p.index(1, 0).unwrap();
        let got: Vec<_> = p.adjacent(v).iter().map(|&v| p.coord(v)).collect();
        assert_eq!(got, vec![(2, 0), (0, 0), (1, 3)]);
    }

    #[test]
    fn odd_wrapped_hexagonal_rejected() {
        assert_eq!(
            Patch::torus(GridKind::Hexagonal, 5, 4),
            Err(LatticeError::OddHexagonalExtent {
                width: 5,
                height: 4
            })
        );
        // open windows do not need even extents
        assert!(Patch::new(
            GridKind::Hexagonal,
            Extents::Plane {
                width: 5,
                height: 3
            },
            Wrap::NONE
        )
        .is_ok());
    }

    #[test]
    fn zero_extent_rejected() {
        assert_eq!(
            Patch::torus(GridKind::Square, 0, 3),
            Err(LatticeError::ZeroExtent)
        );
        assert_eq!(Patch::ring(0), Err(LatticeError::ZeroExtent));
        assert_eq!(
            Patch::new(
                GridKind::BinaryTree,
                Extents::Tree { spine: 3, depth: 0 },
                Wrap::NONE
            ),
            Err(LatticeError::ZeroExtent)
        );
    }

    #[test]
    fn out_of_range_vertex() {
        let p = Patch::ring(3).unwrap();
        assert_eq!(
            p.neighbors(3),
            Err(LatticeError::VertexOutOfRange { vertex: 3, len: 3 })
        );
    }

    #[test]
    fn open_window_interior_mask() {
        let p = Patch::new(
            GridKind::Square,
            Extents::Plane {
                width: 4,
                height: 3,
            },
            Wrap::NONE,
        )
        .unwrap();
        let interior: Vec<_> = p.interior_vertices().map(|v| p.coord(v)).collect();
        assert_eq!(interior, vec![(1, 1), (2, 1)]);
        assert_eq!(p.adjacent(0).len(), 2);
    }

    #[test]
    fn cylinder_wraps_one_axis() {
        let p = Patch::new(
            GridKind::Square,
            Extents::Plane {
                width: 4,
                height: 3,
            },
            Wrap { x: true, y: false },
        )
        .unwrap();
        let interior: Vec<_> = p.interior_vertices().map(|v| p.coord(v)).collect();
        assert_eq!(interior, vec![(0, 1), (1, 1), (2, 1), (3, 1)]);
        assert!(!p.is_fully_wrapped());
        assert_eq!(p.translate(&[1, 0]), Err(LatticeError::NotWrapped));
    }

    #[test]
    fn tree_spine_vertex_has_two_spine_neighbors_and_a_child() {
        let p = Patch::new(
            GridKind::BinaryTree,
            Extents::Tree { spine: 4, depth: 3 },
            Wrap::NONE,
        )
        .unwrap();
        assert_eq!(p.len(), 9 * 8);
        let origin = p.index(0, 0).unwrap();
        let got: Vec<_> = p
            .neighbors(origin)
            .unwrap()
            .iter()
            .map(|&v| p.coord(v))
            .collect();
        assert_eq!(got, vec![(1, 0), (-1, 0), (0, 1)]);
        assert!(p.is_interior(origin));
        // spine ends and leaves are boundary
        assert!(!p.is_interior(p.index(4, 0).unwrap()));
        assert!(!p.is_interior(p.index(-4, 0).unwrap()));
        assert!(!p.is_interior(p.index(0, 4).unwrap()));
        assert!(p.is_interior(p.index(0, 3).unwrap()));
        let child = p.index(0, 1).unwrap();
        let got: Vec<_> = p.adjacent(child).iter().map(|&v| p.coord(v)).collect();
        assert_eq!(got, vec![(0, 0), (0, 2), (0, 3)]);
    }

    #[test]
    fn tree_cannot_wrap() {
        assert_eq!(
            Patch::new(
                GridKind::BinaryTree,
                Extents::Tree { spine: 1, depth: 1 },
                Wrap::BOTH
            ),
            Err(LatticeError::TreeWrap)
        );
    }

    #[test]
    fn zero_shift_is_identity() {
        let p = Patch::torus(GridKind::Square, 4, 4).unwrap();
        let id: Vec<_> = (0..16).collect();
        assert_eq!(p.translate(&[0, 0]).unwrap(), id);
    }

    #[test]
    fn double_shift_by_half_extent_is_identity() {
        let p = Patch::torus(GridKind::Square, 4, 4).unwrap();
        let t = p.translate(&[2, 0]).unwrap();
        let twice: Vec<_> = (0..16).map(|v| t[t[v]]).collect();
        assert_eq!(twice, (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn hexagonal_odd_shift_rejected() {
        let p = Patch::torus(GridKind::Hexagonal, 4, 4).unwrap();
        assert_eq!(
            p.translate(&[1, 0]),
            Err(LatticeError::HexagonalShiftParity)
        );
        assert!(p.translate(&[2, 0]).is_ok());
        assert_eq!(p.translations().unwrap().len(), 4);
    }

    #[test]
    fn shift_dimension_checked() {
        let p = Patch::torus(GridKind::Square, 3, 3).unwrap();
        assert_eq!(
            p.translate(&[1]),
            Err(LatticeError::ShiftDimension {
                expected: 2,
                got: 1
            })
        );
        let r = Patch::ring(5).unwrap();
        assert_eq!(r.translate(&[2]).unwrap(), vec![2, 3, 4, 0, 1]);
    }

    #[test]
    fn hexagonal_period_parity() {
        assert_eq!(
            PeriodVectors::for_kind([2, 0], [1, 2], GridKind::Hexagonal),
            Err(PeriodError::HexagonalParity)
        );
        assert_eq!(
            PeriodVectors::new([2, 4], [1, 2]),
            Err(PeriodError::Dependent)
        );
        assert_eq!(PeriodVectors::new([3, 1], [-1, 2]).unwrap().index(), 7);
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in GridKind::ALL {
            assert_eq!(kind.name().parse::<GridKind>().unwrap(), kind);
        }
    }
}
