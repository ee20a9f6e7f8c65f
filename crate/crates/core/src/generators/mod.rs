//! Constructions of perfect colorings.

mod bitword;
mod motif;
mod path;
mod periodic;
mod search;

use thiserror::Error;

use crate::coloring::ColoringError;
use crate::lattice::{GridKind, LatticeError, PeriodError};

pub use bitword::{bit_sequence_coloring, window_canonical_form, BitWord, BitWordFamily};
pub use motif::{motif_tiling, Motif};
pub use path::path_coloring;
pub use periodic::{period_torus_extents, periodic_lift, PeriodicLift};
pub use search::{point_symmetries, torus_search, SearchOptions, SearchResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error("path colorings need k = 2, matrix has k = {0}")]
    NotPath(usize),
    #[error("matrix is not admissible")]
    Inadmissible,
    #[error("{0} is not supported here")]
    UnsupportedKind(GridKind),
    #[error("motif must be nonempty with {expected} cells, got {got}")]
    MotifShape { expected: usize, got: usize },
    #[error("torus {width}x{height} is not a multiple of the {motif_width}x{motif_height} motif")]
    IncompatibleExtents {
        width: usize,
        height: usize,
        motif_width: usize,
        motif_height: usize,
    },
    #[error("matrix is not one of the supported bit-word families")]
    UnsupportedMatrix,
    #[error("bit word must be nonempty")]
    EmptyBitWord,
    #[error("bit words use only 0 and 1, found {0:?}")]
    BadBit(char),
    #[error("window {width}x{height} too small for a word of length {len}")]
    WindowTooSmall {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("search needs a fully wrapped patch")]
    NotWrapped,
    #[error("search supports at most 64 colors")]
    TooManyColors,
}
