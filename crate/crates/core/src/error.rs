use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge {index} is empty")]
    EmptyEdge { index: usize },

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: u32, n: u32 },

    #[error("edge {index} repeats vertex {vertex}")]
    RepeatedVertex { index: usize, vertex: u32 },

    #[error("arity {j} outside [{lo}, {hi}]")]
    BadArity { j: usize, lo: usize, hi: usize },

    #[error("hypergraph has no edge of size >= 2")]
    NoEdges,

    #[error("instance too large for exhaustive enumeration: n = {n} > {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),

    #[error("dimension gate failed {attempts} times in round {round}")]
    DimensionGateExhausted { round: usize, attempts: usize },

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("cannot generate instance: {0}")]
    Infeasible(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("work budget exceeded: {needed} subset evaluations > budget {budget}")]
    WorkBudget { needed: u128, budget: u128 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
