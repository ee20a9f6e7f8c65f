//! Coloring matrices and colorings of patches, plus the algebra around them.
//!
//! Colors are 0-based indices `0..n` throughout the API. Serialized files and
//! rendered output use the 1-based labels `1..=n`.

mod census;
mod determinant;
mod merger;
mod perfect;
mod refine;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::lattice::Patch;

pub use census::{two_color_census, CensusVerdict};
pub use determinant::{aperiodicity_determinant, aperiodicity_test, bareiss_determinant};
pub use merger::{merge_coloring, merge_matrix, MergeIncompatibility, MergerMap};
pub use perfect::{extract_matrix, neighbor_counts, verify_perfect, PerfectCheck, Violation};
pub use refine::{refine_coloring, refine_field, refine_partition, RefinementResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("matrix rows must all have length {n}")]
    NotSquare { n: usize },
    #[error("matrix must have at least one color")]
    EmptyMatrix,
    #[error("color {color} out of range for {n} colors at vertex {vertex}")]
    ColorOutOfRange {
        vertex: usize,
        color: usize,
        n: usize,
    },
    #[error("coloring has {got} entries, patch has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coloring uses {coloring} colors, matrix has {matrix}")]
    ColorCountMismatch { coloring: usize, matrix: usize },
    #[error("patch degree {patch} differs from matrix row sum {matrix}")]
    DegreeMismatch { patch: usize, matrix: usize },
    #[error("color {color} has no interior vertex")]
    ColorAbsent { color: usize },
    #[error(
        "color {color} is inconsistent: vertex {first} sees {first_counts:?}, vertex {second} sees {second_counts:?}"
    )]
    Inconsistent {
        color: usize,
        first: usize,
        second: usize,
        first_counts: Vec<u32>,
        second_counts: Vec<u32>,
    },
    #[error("merger map must be surjective onto fewer colors: {0}")]
    BadMerger(&'static str),
    #[error("merger is defined on {merger} colors, input has {input}")]
    MergerSize { merger: usize, input: usize },
    #[error("merger is incompatible with the matrix: {0}")]
    Incompatible(MergeIncompatibility),
    #[error("aperiodicity tests are defined for square, triangular and hexagonal grids only")]
    UnsupportedKind,
    #[error("matrix rows must sum to the grid degree {k}")]
    RowSums { k: usize },
    #[error("integer overflow in exact determinant")]
    Overflow,
    #[error("census parameters ({m11}, {m22}) out of range 0..={k}")]
    CensusRange { m11: u32, m22: u32, k: usize },
}

/// The `n x n` neighborhood structure matrix: row `i` counts the colors seen
/// around a vertex of color `i`.
///
/// Construction only checks the shape; [`ColoringMatrix::validate`] reports
/// whether rows sum to `k` and whether the sign pattern is symmetric.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoringMatrix {
    n: usize,
    k: usize,
    entries: Vec<u32>,
}

/// Outcome of [`ColoringMatrix::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatrixReport {
    /// `(row, actual sum)` for every row whose sum differs from `k`.
    pub row_sum_violations: Vec<(usize, u64)>,
    /// `(i, j)` with `i < j` where exactly one of `m[i][j]`, `m[j][i]` is zero.
    pub sign_asymmetries: Vec<(usize, usize)>,
}

impl MatrixReport {
    pub fn admissible(&self) -> bool {
        self.row_sum_violations.is_empty() && self.sign_asymmetries.is_empty()
    }
}

impl ColoringMatrix {
    pub fn new(k: usize, rows: &[Vec<u32>]) -> Result<Self, ColoringError> {
        let n = rows.len();
        if n == 0 {
            return Err(ColoringError::EmptyMatrix);
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(ColoringError::NotSquare { n });
        }
        Ok(ColoringMatrix {
            n,
            k,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    /// Same as [`ColoringMatrix::new`] for fixed-size literals.
    pub fn from_array<const N: usize>(k: usize, rows: [[u32; N]; N]) -> Self {
        assert!(N > 0);
        ColoringMatrix {
            n: N,
            k,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    /// Matrix with rows `k`, used for monochromatic colorings.
    pub fn monochromatic(k: usize) -> Self {
        ColoringMatrix {
            n: 1,
            k,
            entries: vec![k as u32],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.entries.chunks(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn validate(&self) -> MatrixReport {
        let mut report = MatrixReport::default();
        for (i, row) in self.rows().enumerate() {
            let sum: u64 = row.iter().map(|&v| u64::from(v)).sum();
            if sum != self.k as u64 {
                report.row_sum_violations.push((i, sum));
            }
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                if (self.get(i, j) == 0) != (self.get(j, i) == 0) {
                    report.sign_asymmetries.push((i, j));
                }
            }
        }
        report
    }

    pub fn is_admissible(&self) -> bool {
        self.validate().admissible()
    }

    /// Relabels colors: color `i` of `self` becomes color `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut entries = vec![0; self.entries.len()];
        for i in 0..self.n {
            for j in 0..self.n {
                entries[perm[i] * self.n + perm[j]] = self.get(i, j);
            }
        }
        ColoringMatrix {
            n: self.n,
            k: self.k,
            entries,
        }
    }

    /// Integer matrix entries as `i128`, row-major.
    pub(crate) fn to_i128(&self) -> Vec<i128> {
        self.entries.iter().map(|&v| i128::from(v)).collect()
    }
}

impl fmt::Display for ColoringMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{row:?}")?;
        }
        f.write_str("]")
    }
}

/// A color index per patch vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    patch: Arc<Patch>,
    colors: Vec<usize>,
    n: usize,
}

impl Coloring {
    pub fn new(patch: Arc<Patch>, colors: Vec<usize>, n: usize) -> Result<Self, ColoringError> {
        if colors.len() != patch.len() {
            return Err(ColoringError::LengthMismatch {
                expected: patch.len(),
                got: colors.len(),
            });
        }
        if let Some((vertex, &color)) = colors.iter().enumerate().find(|(_, &c)| c >= n) {
            return Err(ColoringError::ColorOutOfRange { vertex, color, n });
        }
        Ok(Coloring { patch, colors, n })
    }

    /// Uses `max + 1` as the number of colors.
    pub fn from_colors(patch: Arc<Patch>, colors: Vec<usize>) -> Result<Self, ColoringError> {
        let n = colors.iter().copied().max().map_or(1, |m| m + 1);
        Self::new(patch, colors, n)
    }

    pub fn constant(patch: Arc<Patch>) -> Self {
        let len = patch.len();
        Coloring {
            patch,
            colors: vec![0; len],
            n: 1,
        }
    }

    pub fn patch(&self) -> &Arc<Patch> {
        &self.patch
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn color(&self, vertex: usize) -> usize {
        self.colors[vertex]
    }

    /// Lexicographically smallest color sequence over all translations of a
    /// fully wrapped patch.
    pub fn translation_canonical_form(&self) -> Result<Vec<usize>, crate::lattice::LatticeError> {
        let perms = self.patch.translations()?;
        Ok(canonical_under(&self.colors, &perms))
    }
}

/// Smallest image of `colors` under a set of vertex permutations, where a
/// permutation `p` maps the coloring `c` to `c'[v] = c[p[v]]`.
pub fn canonical_under(colors: &[usize], perms: &[Vec<usize>]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut buf = vec![0; colors.len()];
    for p in perms {
        for (slot, &src) in buf.iter_mut().zip(p) {
            *slot = colors[src];
        }
        if best.as_ref().is_none_or(|b| buf < *b) {
            best = Some(buf.clone());
        }
    }
    best.unwrap_or_else(|| colors.to_vec())
}

/// A real value per patch vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueField {
    patch: Arc<Patch>,
    values: Vec<f64>,
}

impl ValueField {
    pub fn new(patch: Arc<Patch>, values: Vec<f64>) -> Result<Self, ColoringError> {
        if values.len() != patch.len() {
            return Err(ColoringError::LengthMismatch {
                expected: patch.len(),
                got: values.len(),
            });
        }
        Ok(ValueField { patch, values })
    }

    pub fn constant(patch: Arc<Patch>, value: f64) -> Self {
        let len = patch.len();
        ValueField {
            patch,
            values: vec![value; len],
        }
    }

    pub fn patch(&self) -> &Arc<Patch> {
        &self.patch
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Groups values closer than `tol` (walking the sorted values, a new group
    /// starts once a value is more than `tol` above the first of the current
    /// group). Returns per-vertex group labels ordered by value and the group
    /// representatives.
    pub fn value_classes(&self, tol: f64) -> (Vec<usize>, Vec<f64>) {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        let mut labels = vec![0; self.values.len()];
        let mut reps: Vec<f64> = Vec::new();
        for v in order {
            let x = self.values[v];
            match reps.last() {
                Some(&r) if x - r <= tol => {}
                _ => reps.push(x),
            }
            labels[v] = reps.len() - 1;
        }
        (labels, reps)
    }

    /// The attained values `Im(u)` up to `tol`.
    pub fn image(&self, tol: f64) -> Vec<f64> {
        self.value_classes(tol).1
    }

    /// Coloring by value group, colors ordered by increasing value.
    pub fn to_coloring(&self, tol: f64) -> Coloring {
        let (labels, reps) = self.value_classes(tol);
        Coloring {
            patch: self.patch.clone(),
            colors: labels,
            n: reps.len().max(1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::GridKind;

    #[test]
    fn path_matrix_is_admissible() {
        let m = ColoringMatrix::from_array(2, [[0, 2], [1, 1]]);
        assert!(m.is_admissible());
    }

    #[test]
    fn monochromatic_is_admissible() {
        assert!(ColoringMatrix::from_array(4, [[4]]).is_admissible());
        assert_eq!(
            ColoringMatrix::monochromatic(4),
            ColoringMatrix::from_array(4, [[4]])
        );
    }

    #[test]
    fn sign_asymmetry_reported() {
        let r = ColoringMatrix::from_array(2, [[0, 2], [0, 2]]).validate();
        assert!(!r.admissible());
        assert_eq!(r.sign_asymmetries, vec![(0, 1)]);
        assert!(r.row_sum_violations.is_empty());
    }

    #[test]
    fn row_sum_violation_reported() {
        let r = ColoringMatrix::from_array(4, [[1, 2], [2, 2]]).validate();
        assert_eq!(r.row_sum_violations, vec![(0, 3)]);
    }

    #[test]
    fn non_square_rejected() {
        assert_eq!(
            ColoringMatrix::new(2, &[vec![1, 1], vec![2]]),
            Err(ColoringError::NotSquare { n: 2 })
        );
        assert_eq!(ColoringMatrix::new(2, &[]), Err(ColoringError::EmptyMatrix));
    }

    #[test]
    fn permuted_relabels_both_axes() {
        let m = ColoringMatrix::from_array(4, [[0, 4, 0], [2, 0, 2], [0, 4, 0]]);
        let p = m.permuted(&[0, 2, 1]);
        assert_eq!(
            p,
            ColoringMatrix::from_array(4, [[0, 0, 4], [0, 0, 4], [2, 2, 0]])
        );
    }

    #[test]
    fn coloring_rejects_out_of_range_color() {
        let p = Arc::new(Patch::ring(3).unwrap());
        assert_eq!(
            Coloring::new(p, vec![0, 2, 1], 2),
            Err(ColoringError::ColorOutOfRange {
                vertex: 1,
                color: 2,
                n: 2
            })
        );
    }

    #[test]
    fn value_classes_respect_tolerance() {
        let p = Arc::new(Patch::ring(5).unwrap());
        let f = ValueField::new(p, vec![0.5, 0.0, 0.5 + 1e-9, 1.0, 1e-10]).unwrap();
        let (labels, reps) = f.value_classes(1e-8);
        assert_eq!(labels, vec![1, 0, 1, 2, 0]);
        assert_eq!(reps.len(), 3);
        assert_eq!(f.image(1e-8).len(), 3);
    }

    #[test]
    fn canonical_form_identifies_translates() {
        let p = Arc::new(Patch::torus(GridKind::Square, 4, 4).unwrap());
        let a: Vec<usize> = (0..16).map(|v| usize::from(v % 4 == 1)).collect();
        let b: Vec<usize> = (0..16).map(|v| usize::from(v % 4 == 3)).collect();
        let ca = Coloring::new(p.clone(), a, 2).unwrap();
        let cb = Coloring::new(p, b, 2).unwrap();
        assert_eq!(
            ca.translation_canonical_form().unwrap(),
            cb.translation_canonical_form().unwrap()
        );
    }
}
