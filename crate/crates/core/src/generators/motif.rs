use alloc::sync::Arc;
use alloc::vec::Vec;

use super::GeneratorError;
use crate::coloring::Coloring;
use crate::lattice::{GridKind, Patch};

/// A rectangular block of colors (0-based, row-major) repeated over a torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Motif {
    width: usize,
    height: usize,
    cells: Vec<usize>,
}

impl Motif {
    pub fn new(width: usize, height: usize, cells: Vec<usize>) -> Result<Self, GeneratorError> {
        if width == 0 || height == 0 || cells.len() != width * height {
            return Err(GeneratorError::MotifShape {
                expected: width * height,
                got: cells.len(),
            });
        }
        Ok(Motif {
            width,
            height,
            cells,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn color_count(&self) -> usize {
        self.cells.iter().max().map_or(0, |m| m + 1)
    }
}

pub fn motif_tiling(
    kind: GridKind,
    motif: &Motif,
    width: usize,
    height: usize,
) -> Result<Coloring, GeneratorError> {
    if !kind.is_planar() {
        return Err(GeneratorError::UnsupportedKind(kind));
    }
    if !width.is_multiple_of(motif.width) || !height.is_multiple_of(motif.height) {
        return Err(GeneratorError::IncompatibleExtents {
            width,
            height,
            motif_width: motif.width,
            motif_height: motif.height,
        });
    }
    let patch = Arc::new(Patch::torus(kind, width, height)?);
    let colors = (0..patch.len())
        .map(|v| {
            let (x, y) = (v % width, v / width);
            motif.cells[(y % motif.height) * motif.width + x % motif.width]
        })
        .collect();
    Ok(Coloring::new(patch, colors, motif.color_count())?)
}
