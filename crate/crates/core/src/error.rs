use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Dynkin type: {0}")]
    InvalidType(String),
    #[error("node {node} out of range for rank {rank}")]
    BadNode { node: usize, rank: usize },
    #[error("invalid height function: {0}")]
    BadHeight(String),
    #[error("node {0} is not a source of the height function")]
    NotSource(usize),
    #[error("{0} has no non-trivial folding")]
    NoFolding(String),
    #[error("btilde bound exceeded: need U >= {needed}, have U = {have}")]
    BoundExceeded { needed: i64, have: i64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("monomial {0} is not dominant")]
    NotDominant(String),
    #[error("monomial {monomial} is not {i}-dominant")]
    NotIDominant { monomial: String, i: usize },
    #[error("monomial {0} mixes parity classes of the repetition lattice")]
    Parity(String),
    #[error("odd spectral shift {0}")]
    OddShift(i64),
    #[error("budget of {0} exceeded")]
    Budget(usize),
    #[error("kernel check failed for node {i}: {detail}")]
    Kernel { i: usize, detail: String },
    #[error("inconsistent coefficient at {0}")]
    Inconsistent(String),
    #[error("non-integral Kazhdan-Lusztig coefficient at {0}")]
    NonIntegral(String),
    #[error("vertex {0} is frozen")]
    Frozen(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("exact division failed: {0}")]
    Division(String),
    #[error("variable at {0} is not materialized")]
    Missing(String),
    #[error("window too small: {0}")]
    Window(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
