//! Encoders: implicit auxiliary hypergraphs whose matchings are partial
//! colorings of a host graph.

pub mod bipartite;
pub mod k4;
pub mod triangles;

pub use bipartite::{BipartiteStars, StarCandidate};
pub use k4::{CherryTriangles, K4Params, TriangleCandidate};
pub use triangles::{TriCandidate, Triangles};
