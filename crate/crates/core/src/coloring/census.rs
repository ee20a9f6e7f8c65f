//! Number of inequivalent two-color perfect colorings of the planar grids.

use core::fmt;

use super::ColoringError;
use crate::lattice::GridKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CensusVerdict {
    Nonexistent,
    Unique,
    TwoNonequivalent,
    Uncountable,
    MonochromaticOnly,
}

impl CensusVerdict {
    pub fn name(self) -> &'static str {
        match self {
            CensusVerdict::Nonexistent => "nonexistent",
            CensusVerdict::Unique => "unique",
            CensusVerdict::TwoNonequivalent => "two_nonequivalent",
            CensusVerdict::Uncountable => "uncountable",
            CensusVerdict::MonochromaticOnly => "monochromatic_only",
        }
    }

    pub fn exists(self) -> bool {
        !matches!(self, CensusVerdict::Nonexistent)
    }
}

impl fmt::Display for CensusVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

use CensusVerdict::{Nonexistent as N, TwoNonequivalent as T, Uncountable as I, Unique as U};

// Upper triangles, row m11, column m22 >= m11.
const SQUARE: [[CensusVerdict; 4]; 4] = [[U, N, U, U], [N, U, U, I], [U, U, I, T], [U, I, T, U]];

const TRIANGULAR: [[CensusVerdict; 6]; 6] = [
    [N, N, N, U, I, U],
    [N, N, N, I, U, N],
    [N, N, I, T, T, N],
    [U, I, T, U, N, N],
    [I, U, T, N, U, N],
    [U, N, N, N, N, N],
];

const HEXAGONAL: [[CensusVerdict; 3]; 3] = [[U, N, I], [N, I, U], [I, U, I]];

/// Verdict for the matrix `[[m11, k - m11], [k - m22, m22]]`.
pub fn two_color_census(
    kind: GridKind,
    m11: u32,
    m22: u32,
) -> Result<CensusVerdict, ColoringError> {
    if !kind.is_planar() {
        return Err(ColoringError::UnsupportedKind);
    }
    let k = kind.degree();
    if m11 as usize > k || m22 as usize > k {
        return Err(ColoringError::CensusRange { m11, m22, k });
    }
    if m11 as usize == k || m22 as usize == k {
        return Ok(CensusVerdict::MonochromaticOnly);
    }
    let (i, j) = (m11 as usize, m22 as usize);
    Ok(match kind {
        GridKind::Square => SQUARE[i][j],
        GridKind::Triangular => TRIANGULAR[i][j],
        GridKind::Hexagonal => HEXAGONAL[i][j],
        GridKind::Path | GridKind::BinaryTree => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_symmetric() {
        for kind in [GridKind::Square, GridKind::Triangular, GridKind::Hexagonal] {
            let k = kind.degree() as u32;
            for a in 0..=k {
                for b in 0..=k {
                    assert_eq!(
                        two_color_census(kind, a, b).unwrap(),
                        two_color_census(kind, b, a).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn sample_entries() {
        use CensusVerdict::*;
        assert_eq!(
            two_color_census(GridKind::Square, 1, 0).unwrap(),
            Nonexistent
        );
        assert_eq!(
            two_color_census(GridKind::Square, 2, 2).unwrap(),
            Uncountable
        );
        assert_eq!(
            two_color_census(GridKind::Square, 3, 2).unwrap(),
            TwoNonequivalent
        );
        assert_eq!(
            two_color_census(GridKind::Triangular, 3, 3).unwrap(),
            Unique
        );
        assert_eq!(
            two_color_census(GridKind::Triangular, 1, 3).unwrap(),
            Uncountable
        );
        assert_eq!(
            two_color_census(GridKind::Hexagonal, 1, 1).unwrap(),
            Uncountable
        );
        assert_eq!(
            two_color_census(GridKind::Hexagonal, 3, 0).unwrap(),
            MonochromaticOnly
        );
    }

    #[test]
    fn out_of_range() {
        assert_eq!(
            two_color_census(GridKind::Square, 5, 0),
            Err(ColoringError::CensusRange {
                m11: 5,
                m22: 0,
                k: 4
            })
        );
        assert_eq!(
            two_color_census(GridKind::Path, 0, 0),
            Err(ColoringError::UnsupportedKind)
        );
    }
}
