//! Geometry and combinatorics of the right-angled pentagon group.
//!
//! The group `W` generated by reflections in the sides of a regular
//! right-angled pentagon acts on H² and on its Davis complex, a CAT(0)
//! square complex. This crate measures both actions side by side.

pub mod cli;
pub mod conjugacy;
pub mod coxeter;
pub mod davis;
pub mod error;
pub mod geometry;
pub mod growth;
pub mod pieces;
pub mod presentation;
pub mod qi;
pub mod quotient;
pub mod render;
pub mod tiling;

pub use error::{Error, Result};

/// Crate version embedded in every output.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
