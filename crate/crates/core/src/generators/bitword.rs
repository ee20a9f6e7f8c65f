//! Aperiodic perfect colorings of the square grid driven by a bit word.
//!
//! Two families are supported, both built so that every choice of bits gives
//! a perfect coloring:
//!
//! - `[[2,2],[2,2]]`: a monotone staircase `p_s` through the anti-diagonals
//!   `x + y = s` starts at the origin and takes its steps in pairs. Pair `q`
//!   reads bit `b_{q mod L}`: `0` steps right then up, `1` steps up then right.
//!   A vertex on anti-diagonal `s` gets color `(x - p_s.x) mod 2`, so the
//!   monochromatic diagonal stripes bend wherever the staircase turns.
//! - `[[0,2,2],[4,0,0],[4,0,0]]`: even sites get color 0. The odd site `(x, y)`
//!   lies on anti-diagonal stripe `u = (x + y - 1) / 2` at position
//!   `w = floor((x - y - 1) / 2)` and gets color `1 + (b_{u mod L} xor (w mod 2))`,
//!   so bit 1 shifts the alternation of stripe `u` by one site.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::GeneratorError;
use crate::coloring::{Coloring, ColoringMatrix};
use crate::lattice::{Extents, GridKind, Patch, Wrap};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitWord {
    bits: Vec<bool>,
}

impl BitWord {
    pub fn new(bits: Vec<bool>) -> Result<Self, GeneratorError> {
        if bits.is_empty() {
            return Err(GeneratorError::EmptyBitWord);
        }
        Ok(BitWord { bits })
    }

    /// Parses a string of `0` and `1`.
    pub fn parse(s: &str) -> Result<Self, GeneratorError> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(GeneratorError::BadBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Bit `i` of the periodic extension.
    pub fn get(&self, i: i64) -> bool {
        self.bits[i.rem_euclid(self.bits.len() as i64) as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitWordFamily {
    Stripes,
    ThreeColor,
}

impl BitWordFamily {
    pub fn of(matrix: &ColoringMatrix) -> Option<Self> {
        if *matrix == ColoringMatrix::from_array(4, [[2, 2], [2, 2]]) {
            Some(BitWordFamily::Stripes)
        } else if *matrix == ColoringMatrix::from_array(4, [[0, 2, 2], [4, 0, 0], [4, 0, 0]]) {
            Some(BitWordFamily::ThreeColor)
        } else {
            None
        }
    }
}

/// Colors an open `width x height` square window. The window must be at least
/// 3x3 and its anti-diagonals must cover every bit of the word.
pub fn bit_sequence_coloring(
    matrix: &ColoringMatrix,
    bits: &BitWord,
    width: usize,
    height: usize,
) -> Result<Coloring, GeneratorError> {
    let family = BitWordFamily::of(matrix).ok_or(GeneratorError::UnsupportedMatrix)?;
    if width < 3 || height < 3 || width + height - 1 < 2 * bits.len() {
        return Err(GeneratorError::WindowTooSmall {
            width,
            height,
            len: bits.len(),
        });
    }
    let patch = Arc::new(Patch::new(
        GridKind::Square,
        Extents::Plane { width, height },
        Wrap::NONE,
    )?);
    let colors: Vec<usize> = match family {
        BitWordFamily::Stripes => {
            let diagonals = width + height - 1;
            let mut px = Vec::with_capacity(diagonals);
            let mut x = 0i64;
            for s in 0..diagonals {
                px.push(x);
                let turn_up_first = bits.get((s / 2) as i64);
                let right = (s % 2 == 0) != turn_up_first;
                x += i64::from(right);
            }
            (0..patch.len())
                .map(|v| {
                    let (x, y) = patch.coord(v);
                    (x - px[(x + y) as usize]).rem_euclid(2) as usize
                })
                .collect()
        }
        BitWordFamily::ThreeColor => (0..patch.len())
            .map(|v| {
                let (x, y) = patch.coord(v);
                if (x + y) % 2 == 0 {
                    0
                } else {
                    let u = (x + y - 1) / 2;
                    let w = (x - y - 1).div_euclid(2);
                    1 + (usize::from(bits.get(u)) ^ (w.rem_euclid(2) as usize))
                }
            })
            .collect(),
    };
    Ok(Coloring::new(patch, colors, matrix.n())?)
}

/// Smallest color array over all cyclic shifts of a planar window.
pub fn window_canonical_form(coloring: &Coloring) -> Vec<usize> {
    let Some((width, height)) = coloring.patch().plane_size() else {
        return coloring.colors().to_vec();
    };
    let colors = coloring.colors();
    let mut best: Option<Vec<usize>> = None;
    let mut buf = alloc::vec![0; colors.len()];
    for dy in 0..height {
        for dx in 0..width {
            for y in 0..height {
                for x in 0..width {
                    buf[y * width + x] = colors[((y + dy) % height) * width + (x + dx) % width];
                }
            }
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_perfect;

    fn stripes() -> ColoringMatrix {
        ColoringMatrix::from_array(4, [[2, 2], [2, 2]])
    }

    fn three() -> ColoringMatrix {
        ColoringMatrix::from_array(4, [[0, 2, 2], [4, 0, 0], [4, 0, 0]])
    }

    #[test]
    fn zero_word_gives_straight_stripes() {
        let c = bit_sequence_coloring(&stripes(), &BitWord::parse("0").unwrap(), 12, 12).unwrap();
        assert!(verify_perfect(&c, &stripes()).unwrap().is_perfect());
        // stripes repeat under the shift (2, 2)
        let p = c.patch();
        for v in 0..p.len() {
            let (x, y) = p.coord(v);
            if let Some(w) = p.index(x + 2, y + 2) {
                assert_eq!(c.color(v), c.color(w));
            }
        }
    }

    #[test]
    fn staircase_verifies() {
        let c =
            bit_sequence_coloring(&stripes(), &BitWord::parse("0101").unwrap(), 16, 16).unwrap();
        assert!(verify_perfect(&c, &stripes()).unwrap().is_perfect());
    }

    #[test]
    fn three_color_family_verifies() {
        for word in ["0", "1", "0110", "00010111"] {
            let c =
                bit_sequence_coloring(&three(), &BitWord::parse(word).unwrap(), 16, 16).unwrap();
            assert!(verify_perfect(&c, &three()).unwrap().is_perfect(), "{word}");
        }
    }

    #[test]
    fn different_words_are_inequivalent() {
        let a = bit_sequence_coloring(&stripes(), &BitWord::parse("00").unwrap(), 8, 8).unwrap();
        let b = bit_sequence_coloring(&stripes(), &BitWord::parse("01").unwrap(), 8, 8).unwrap();
        assert_ne!(window_canonical_form(&a), window_canonical_form(&b));
    }

    #[test]
    fn errors() {
        let w = BitWord::parse("0101").unwrap();
        assert_eq!(
            bit_sequence_coloring(&ColoringMatrix::from_array(4, [[0, 4], [4, 0]]), &w, 8, 8),
            Err(GeneratorError::UnsupportedMatrix)
        );
        assert!(matches!(
            bit_sequence_coloring(&stripes(), &w, 4, 4),
            Err(GeneratorError::WindowTooSmall { .. })
        ));
        assert_eq!(BitWord::parse(""), Err(GeneratorError::EmptyBitWord));
    }
}
