use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Coloring, ColoringError, ColoringMatrix};

/// Surjective relabeling `phi: {0..n} -> {0..l}` with `l < n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MergerMap {
    images: Vec<usize>,
    target_count: usize,
}

impl MergerMap {
    /// `images[i]` is the merged color of source color `i`. The target count is
    /// `max + 1`; every target color must be hit and there must be fewer
    /// targets than sources.
    pub fn new(images: Vec<usize>) -> Result<Self, ColoringError> {
        let Some(max) = images.iter().copied().max() else {
            return Err(ColoringError::BadMerger("empty map"));
        };
        let target_count = max + 1;
        let mut hit = vec![false; target_count];
        for &t in &images {
            hit[t] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err(ColoringError::BadMerger("not surjective"));
        }
        if target_count >= images.len() {
            return Err(ColoringError::BadMerger("does not reduce the color count"));
        }
        Ok(MergerMap {
            images,
            target_count,
        })
    }

    /// Groups source colors by value equality classes, e.g. a partition of the
    /// coordinates of a solution vector. Targets are numbered by first
    /// occurrence.
    pub fn from_classes(classes: &[usize]) -> Result<Self, ColoringError> {
        let mut seen: Vec<usize> = Vec::new();
        let images = classes
            .iter()
            .map(|c| match seen.iter().position(|s| s == c) {
                Some(i) => i,
                None => {
                    seen.push(*c);
                    seen.len() - 1
                }
            })
            .collect();
        Self::new(images)
    }

    pub fn source_count(&self) -> usize {
        self.images.len()
    }

    pub fn target_count(&self) -> usize {
        self.target_count
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, color: usize) -> usize {
        self.images[color]
    }
}

/// Two source colors with the same image whose aggregated rows disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeIncompatibility {
    pub target: usize,
    pub first_source: usize,
    pub second_source: usize,
    pub first_row: Vec<u32>,
    pub second_row: Vec<u32>,
}

impl fmt::Display for MergeIncompatibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "colors {} and {} merge into {} but aggregate to {:?} and {:?}",
            self.first_source, self.second_source, self.target, self.first_row, self.second_row
        )
    }
}

/// Aggregates the columns of `matrix` along `merger`: the merged row of target
/// `i` is `sum_{s in phi^-1(j)} m[src][s]` for any source `src` with
/// `phi(src) = i`, provided all such sources agree.
pub fn merge_matrix(
    matrix: &ColoringMatrix,
    merger: &MergerMap,
) -> Result<ColoringMatrix, ColoringError> {
    if merger.source_count() != matrix.n() {
        return Err(ColoringError::MergerSize {
            merger: merger.source_count(),
            input: matrix.n(),
        });
    }
    let l = merger.target_count();
    let mut rows: Vec<Option<(usize, Vec<u32>)>> = vec![None; l];
    for src in 0..matrix.n() {
        let mut agg = vec![0u32; l];
        for (s, &v) in matrix.row(src).iter().enumerate() {
            agg[merger.apply(s)] += v;
        }
        let target = merger.apply(src);
        match &rows[target] {
            None => rows[target] = Some((src, agg)),
            Some((first, row)) if *row != agg => {
                return Err(ColoringError::Incompatible(MergeIncompatibility {
                    target,
                    first_source: *first,
                    second_source: src,
                    first_row: row.clone(),
                    second_row: agg,
                }))
            }
            Some(_) => {}
        }
    }
    let rows: Vec<Vec<u32>> = rows.into_iter().map(|r| r.expect("surjective").1).collect();
    ColoringMatrix::new(matrix.k(), &rows)
}

pub fn merge_coloring(coloring: &Coloring, merger: &MergerMap) -> Result<Coloring, ColoringError> {
    if merger.source_count() != coloring.n() {
        return Err(ColoringError::MergerSize {
            merger: merger.source_count(),
            input: coloring.n(),
        });
    }
    let colors = coloring.colors().iter().map(|&c| merger.apply(c)).collect();
    Coloring::new(coloring.patch().clone(), colors, merger.target_count())
}
