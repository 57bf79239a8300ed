//! Maximal independent sets in hypergraphs.
//!
//! - [`baseline`]: sequential greedy and an exhaustive oracle.
//! - [`bl`]: the Beame–Luby marking algorithm.
//! - [`sbl`]: sampling on top of BL for large dimension.
//! - [`degree`] and [`analysis`]: degree profiles, potentials, bound
//!   constants, and Monte Carlo estimates of the round lemmas.

pub mod analysis;
pub mod baseline;
pub mod bl;
pub mod degree;
mod error;
pub mod gen;
mod hypergraph;
pub mod io;
pub mod rng;
pub mod sbl;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, Vertex, VertexSet};
