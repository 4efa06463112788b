//! Craig interpolants and uniform separators for ALCH and ALCQ ontologies
//! via mosaic elimination.

pub mod bits;
pub mod error;
pub mod families;
pub mod interpolate;
pub mod mosaics;
pub mod par;
pub mod reasoner;
pub mod separators;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};
