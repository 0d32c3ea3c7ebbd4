//! Random greedy conflict-free hypergraph matchings and Moser–Tardos
//! finishing for generalized Ramsey edge-colorings.
//!
//! Three constructions are provided:
//!
//! * [`encode::BipartiteStars`]: `K_{n,n}`, every 4-cycle gets 3 colors.
//! * [`encode::CherryTriangles`]: `K_n`, every `K_4` gets 5 colors.
//! * [`encode::Triangles`]: `K_n`, every 4-cycle gets 3 colors.
//!
//! Stage 1 runs [`matching::run_random_greedy`] on the encoder, stage 2
//! colors the leftover graph with [`lll::moser_tardos`], and [`verify`]
//! certifies the result.

pub mod encode;
pub mod error;
pub mod graph;
pub mod lll;
pub mod matching;
pub mod pipeline;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{ColorId, EdgeColoring, HostGraph, HostKind};
