use alloc::vec;
use alloc::vec::Vec;

use super::{Coloring, ColoringError, ColoringMatrix};

/// First interior vertex whose neighborhood disagrees with the matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub vertex: usize,
    pub color: usize,
    /// Row `color` of the matrix.
    pub expected: Vec<u32>,
    /// Observed neighbor color counts.
    pub found: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PerfectCheck {
    Perfect,
    Violated(Violation),
}

impl PerfectCheck {
    pub fn is_perfect(&self) -> bool {
        matches!(self, PerfectCheck::Perfect)
    }
}

/// Neighbor color counts of `vertex`, with multiplicity.
pub fn neighbor_counts(coloring: &Coloring, vertex: usize) -> Vec<u32> {
    let mut counts = vec![0u32; coloring.n()];
    for &w in coloring.patch().adjacent(vertex) {
        counts[coloring.color(w)] += 1;
    }
    counts
}

/// Checks the perfect-coloring condition on every interior vertex.
pub fn verify_perfect(
    coloring: &Coloring,
    matrix: &ColoringMatrix,
) -> Result<PerfectCheck, ColoringError> {
    if coloring.n() != matrix.n() {
        return Err(ColoringError::ColorCountMismatch {
            coloring: coloring.n(),
            matrix: matrix.n(),
        });
    }
    let patch = coloring.patch();
    if patch.degree() != matrix.k() {
        return Err(ColoringError::DegreeMismatch {
            patch: patch.degree(),
            matrix: matrix.k(),
        });
    }
    let mut counts = vec![0u32; matrix.n()];
    for v in patch.interior_vertices() {
        counts.iter_mut().for_each(|c| *c = 0);
        for &w in patch.adjacent(v) {
            counts[coloring.color(w)] += 1;
        }
        let color = coloring.color(v);
        if counts.as_slice() != matrix.row(color) {
            return Ok(PerfectCheck::Violated(Violation {
                vertex: v,
                color,
                expected: matrix.row(color).to_vec(),
                found: counts,
            }));
        }
    }
    Ok(PerfectCheck::Perfect)
}

/// Reads the coloring matrix off the interior vertices.
///
/// Fails with [`ColoringError::Inconsistent`] naming the lowest pair of
/// interior vertices of one color that see different neighborhoods, or with
/// [`ColoringError::ColorAbsent`] if some color has no interior vertex.
pub fn extract_matrix(coloring: &Coloring) -> Result<ColoringMatrix, ColoringError> {
    let n = coloring.n();
    let patch = coloring.patch();
    let mut rows: Vec<Option<(usize, Vec<u32>)>> = vec![None; n];
    for v in patch.interior_vertices() {
        let counts = neighbor_counts(coloring, v);
        let color = coloring.color(v);
        match &rows[color] {
            None => rows[color] = Some((v, counts)),
            Some((first, seen)) if *seen != counts => {
                return Err(ColoringError::Inconsistent {
                    color,
                    first: *first,
                    second: v,
                    first_counts: seen.clone(),
                    second_counts: counts,
                })
            }
            Some(_) => {}
        }
    }
    let mut out = Vec::with_capacity(n);
    for (color, row) in rows.into_iter().enumerate() {
        match row {
            Some((_, counts)) => out.push(counts),
            None => return Err(ColoringError::ColorAbsent { color }),
        }
    }
    ColoringMatrix::new(patch.degree(), &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{GridKind, Patch};
    use alloc::sync::Arc;

    fn checkerboard(size: usize) -> Coloring {
        let p = Arc::new(Patch::torus(GridKind::Square, size, size).unwrap());
        let colors = (0..p.len())
            .map(|v| {
                let (x, y) = p.coord(v);
                ((x + y) % 2) as usize
            })
            .collect();
        Coloring::new(p, colors, 2).unwrap()
    }

    #[test]
    fn checkerboard_is_perfect() {
        let m = ColoringMatrix::from_array(4, [[0, 4], [4, 0]]);
        assert!(verify_perfect(&checkerboard(4), &m).unwrap().is_perfect());
    }

    #[test]
    fn checkerboard_fails_uniform_matrix() {
        let m = ColoringMatrix::from_array(4, [[2, 2], [2, 2]]);
        match verify_perfect(&checkerboard(4), &m).unwrap() {
            PerfectCheck::Violated(w) => {
                assert_eq!(w.vertex, 0);
                assert_eq!(w.expected, vec![2, 2]);
                assert_eq!(w.found, vec![0, 4]);
            }
            PerfectCheck::Perfect => panic!("should fail"),
        }
    }

    #[test]
    fn ring_word_122_is_perfect() {
        let p = Arc::new(Patch::ring(6).unwrap());
        let c = Coloring::new(p, vec![0, 1, 1, 0, 1, 1], 2).unwrap();
        let m = ColoringMatrix::from_array(2, [[0, 2], [1, 1]]);
        assert!(verify_perfect(&c, &m).unwrap().is_perfect());
        assert_eq!(extract_matrix(&c).unwrap(), m);
    }

    #[test]
    fn dimension_mismatch() {
        let m = ColoringMatrix::from_array(6, [[0, 6], [6, 0]]);
        assert_eq!(
            verify_perfect(&checkerboard(4), &m),
            Err(ColoringError::DegreeMismatch {
                patch: 4,
                matrix: 6
            })
        );
        let m = ColoringMatrix::from_array(4, [[4]]);
        assert!(matches!(
            verify_perfect(&checkerboard(4), &m),
            Err(ColoringError::ColorCountMismatch { .. })
        ));
    }

    #[test]
    fn extract_checkerboard() {
        assert_eq!(
            extract_matrix(&checkerboard(4)).unwrap(),
            ColoringMatrix::from_array(4, [[0, 4], [4, 0]])
        );
    }

    #[test]
    fn absent_color_reported() {
        let p = Arc::new(Patch::ring(4).unwrap());
        let c = Coloring::new(p, vec![0, 0, 0, 0], 2).unwrap();
        assert_eq!(
            extract_matrix(&c),
            Err(ColoringError::ColorAbsent { color: 1 })
        );
    }
}
