use thiserror::Error;

/// Errors raised across the lab.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("nonpositive length on edge {0}")]
    NonpositiveLength(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {edge} references missing vertex {vertex}")]
    DanglingVertex { edge: String, vertex: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("symbol {0} outside the group rank")]
    SymbolOutOfRange(String),
    #[error("malformed word {0:?}")]
    MalformedWord(String),
    #[error("invalid permutation extension: {0}")]
    InvalidExtension(String),
    #[error("invalid group rank {0}")]
    InvalidRank(usize),
    #[error("voltage refers to unknown edge {0}")]
    UnknownEdge(String),
    #[error("vertex budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("query needs radius {needed} but the patch is certified to {available}")]
    Uncertified { needed: f64, available: f64 },
    #[error("point does not lie in the explored patch")]
    PointOutsidePatch,
    #[error("encoded ray is not geodesic: {0}")]
    NotGeodesic(String),
    #[error("boundary points are indistinguishable up to depth {0}")]
    Indistinguishable(usize),
    #[error("boundary set has fewer than two points")]
    TooFewBoundaryPoints,
    #[error("boundary set is empty")]
    EmptyBoundarySet,
    #[error("operation requires a tree-like geodesic core")]
    NotTree,
    #[error("shift is empty after pruning")]
    EmptyShift,
    #[error("partition is not compatible with the involution: {0}")]
    IncompatiblePartition(String),
    #[error("only unit edge lengths are supported here")]
    NonUnitLengths,
    #[error("path is not periodic")]
    Aperiodic,
    #[error("word is not admissible: {0}")]
    Inadmissible(String),
    #[error("horizon {0} is too short to decide the requested condition")]
    HorizonTooShort(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("strategy {0} does not apply to this space")]
    StrategyMismatch(String),
    #[error("unknown example {0}")]
    UnknownExample(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
