//! Analytical quantities and Monte Carlo checks for the marking process.

mod montecarlo;
mod potential;
mod weighted;

pub use montecarlo::*;
pub use potential::*;
pub use weighted::{migration_hypergraph, WeightedEdge, WeightedHypergraph};

pub(crate) use weighted::for_each_subset_of_size;
