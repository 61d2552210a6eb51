//! Colour-isomorphic copies of rooted tree powers in edge-coloured complete graphs.

pub mod cli;
pub mod colouring;
pub mod correspondence;
pub mod error;
pub mod field;
pub mod graph;
pub mod lower;
pub mod plant;
pub mod rng;
pub mod trees;
pub mod union_find;
pub mod witness;

pub use error::{Error, Result};
