//! Coherent configurations of graphs, Weisfeiler-Leman refinement in
//! dimension two and higher, Cartesian prime factorization, and the tensor
//! and exponentiation constructions on coherent configurations.

pub mod cc;
pub mod constructions;
pub mod corpus;
pub mod error;
pub mod factor;
pub mod graph;
pub mod kwl;
mod refine;
pub mod union_find;
pub mod verify;

pub use error::{Error, ParseError, Result};
