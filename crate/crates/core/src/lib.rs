//! Total list coloring of planar graphs with maximum degree at most 8.

pub mod catalog;
pub mod choose;
pub mod classify;
pub mod colorer;
pub mod discharge;
pub mod error;
pub mod gen;
pub mod graph;
pub mod nss;
pub mod poly;
pub mod shift;
pub mod total;

pub use error::{Error, Result};
