//! Decision procedures, constructions and certificate checkers for uniformly
//! dense hypergraphs and their forbidden sub-hypergraphs.

pub mod colour;
pub mod combinatorics;
pub mod density;
pub mod error;
pub mod hypergraph;
pub mod inequality;
pub mod reduced;
pub mod search;
pub mod ternary;

pub use error::{Error, ParseError, Result};
pub use hypergraph::{enumerate_hypergraphs, Hypergraph, Shadow, Vertex};
pub use search::{contains_copy, count_homomorphisms, count_injective_homomorphisms, VertexMap};
