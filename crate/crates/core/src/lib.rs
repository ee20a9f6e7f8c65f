//! Perfect colorings of regular lattices and the perfect stationary solutions
//! they carry for lattice reaction-diffusion equations
//!
//! ```text
//! u_i' = d * sum_{j in N(i)} (u_j - u_i) + f(u_i)
//! ```
//!
//! A coloring is *perfect* with matrix `m` when the multiset of colors around a
//! vertex depends only on the color of that vertex. Assigning one real value
//! per color then collapses the (possibly infinite) stationary problem to the
//! finite system `0 = d (m v - k v) + F(v)`.
//!
//! The crate is split by concern:
//!
//! - [`lattice`]: finite patches (rings, tori, open windows, truncated binary
//!   trees) with exact neighbor topology.
//! - [`coloring`]: coloring matrices, verification, extraction, equitable
//!   refinement, merger algebra, aperiodicity determinants and the two-color
//!   census tables.
//! - [`generators`]: constructions of perfect colorings (path words, periodic
//!   lifts, motif tilings, bit-word families) and exhaustive torus search.
//! - [`solver`]: root enumeration of the finite stationary system, Jacobians,
//!   spectral stability and transport of solutions across mergers.
//! - [`dynamics`]: time integration on patches, stationarity residuals,
//!   perturbation probes and the binary-tree finite-image example.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, rendering and
//! the command-line front end live in the `latticeperfect` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coloring;
pub mod dynamics;
pub mod generators;
pub mod lattice;
pub mod linalg;
pub mod solver;

pub use coloring::{Coloring, ColoringMatrix, MergerMap, ValueField};
pub use lattice::{Extents, GridKind, Patch, Wrap};
pub use solver::{Nonlinearity, SolverConfig};

/// Absolute tolerance under which two field values count as the same value.
pub const VALUE_TOLERANCE: f64 = 1e-8;
