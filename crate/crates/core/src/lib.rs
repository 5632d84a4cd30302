//! Exact computations with Soergel modules, Kazhdan–Lusztig combinatorics and
//! their modular analogues for finite Weyl groups.
//!
//! The pipeline runs bottom-up: [`rootdata`] enumerates the Weyl group,
//! [`hecke`] provides the characteristic-zero Kazhdan–Lusztig oracle,
//! [`coinvariant`] builds the coinvariant algebra over a coefficient ring,
//! [`soergel`] constructs and decomposes Soergel modules, and [`charcalc`]
//! turns graded Hom ranks into stalk and multiplicity tables.

pub mod charcalc;
pub mod coinvariant;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod matrix;
pub mod ring;
pub mod rootdata;
pub mod soergel;

pub use error::{Error, Result};

/// Identifies the numerical engine in cache keys and output headers.
pub const ENGINE_VERSION: &str = concat!("ptilt-core/", env!("CARGO_PKG_VERSION"));
