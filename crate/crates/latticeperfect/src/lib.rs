//! File formats, rendering and the command-line front end for
//! `latticeperfect-core`.

pub mod cli;
pub mod formats;
pub mod manifest;
pub mod render;
