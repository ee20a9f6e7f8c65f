use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::GeneratorError;
use crate::coloring::ColoringMatrix;

/// All perfect colorings of the bi-infinite path for `matrix`, as periodic
/// words in canonical form (smallest rotation or reflection of the primitive
/// period). An empty result means no coloring exists.
///
/// A vertex of color `c` entered from color `p` must leave towards the other
/// entry of row `c`, so the pair `(p, c)` determines the pair `(c, next)`.
/// This map is a permutation of the admissible pairs; each of its cycles
/// spells one periodic word. Reducible matrices give one family of words per
/// closed color block.
pub fn path_coloring(matrix: &ColoringMatrix) -> Result<Vec<Vec<usize>>, GeneratorError> {
    if matrix.k() != 2 {
        return Err(GeneratorError::NotPath(matrix.k()));
    }
    if !matrix.is_admissible() {
        return Err(GeneratorError::Inadmissible);
    }
    let n = matrix.n();
    let next_of = |prev: usize, cur: usize| -> Option<usize> {
        if matrix.get(cur, prev) == 0 {
            return None;
        }
        let mut row = matrix.row(cur).to_vec();
        row[prev] -= 1;
        row.iter().position(|&c| c > 0)
    };
    let mut visited = vec![false; n * n];
    let mut words = BTreeSet::new();
    for start in 0..n * n {
        if visited[start] {
            continue;
        }
        let (p0, c0) = (start / n, start % n);
        if next_of(p0, c0).is_none() {
            visited[start] = true;
            continue;
        }
        let mut word = Vec::new();
        let (mut p, mut c) = (p0, c0);
        loop {
            visited[p * n + c] = true;
            word.push(c);
            let nx = next_of(p, c).expect("pair map is a permutation");
            p = c;
            c = nx;
            if (p, c) == (p0, c0) {
                break;
            }
        }
        words.insert(canonical_word(&word));
    }
    Ok(words.into_iter().collect())
}

fn canonical_word(word: &[usize]) -> Vec<usize> {
    let period = (1..=word.len())
        .find(|&p| word.len().is_multiple_of(p) && (p..word.len()).all(|i| word[i] == word[i - p]))
        .unwrap_or(word.len());
    let base = &word[..period];
    let mut best: Option<Vec<usize>> = None;
    for reversed in [false, true] {
        let seq: Vec<usize> = if reversed {
            base.iter().rev().copied().collect()
        } else {
            base.to_vec()
        };
        for r in 0..period {
            let cand: Vec<usize> = (0..period).map(|i| seq[(r + i) % period]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_color_word() {
        let m = ColoringMatrix::from_array(2, [[0, 2], [1, 1]]);
        assert_eq!(path_coloring(&m).unwrap(), vec![vec![0, 1, 1]]);
    }

    #[test]
    fn cycle_configuration() {
        let m = ColoringMatrix::from_array(2, [[0, 1, 1], [1, 0, 1], [1, 1, 0]]);
        assert_eq!(path_coloring(&m).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn loop_ended_configuration() {
        let m = ColoringMatrix::from_array(2, [[1, 1, 0], [1, 0, 1], [0, 1, 1]]);
        assert_eq!(path_coloring(&m).unwrap(), vec![vec![0, 0, 1, 2, 2, 1]]);
    }

    #[test]
    fn reducible_matrix_gives_one_word_per_block() {
        let m = ColoringMatrix::from_array(2, [[2, 0, 0], [0, 0, 2], [0, 2, 0]]);
        assert_eq!(path_coloring(&m).unwrap(), vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn wrong_degree() {
        let m = ColoringMatrix::from_array(4, [[4]]);
        assert_eq!(path_coloring(&m), Err(GeneratorError::NotPath(4)));
    }

    #[test]
    fn canonical_word_reduces_period() {
        assert_eq!(canonical_word(&[1, 0, 1, 0]), vec![0, 1]);
        assert_eq!(canonical_word(&[2, 1, 0]), vec![0, 1, 2]);
    }
}
