use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is disconnected: {count} components (sizes {sizes:?})")]
    Disconnected { count: usize, sizes: Vec<usize> },
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("invalid walk configuration: {0}")]
    InvalidConfig(String),
    #[error("conductance must be positive and finite, got {0}")]
    InvalidConductance(f64),
    #[error("enumeration would exceed {limit} trajectories")]
    EnumerationTooLarge { limit: usize },
    #[error("record parse error at byte {pos}: {msg}")]
    RecordParse { pos: usize, msg: String },
    #[error("missing attribute for vertex {0}")]
    MissingAttribute(usize),
    #[error("graph with {n} vertices exceeds the isomorphism search limit of {limit}")]
    TooLargeForIsomorphism { n: usize, limit: usize },
    #[error("covering walk failed to reconstruct the source graph (trial {trial}, record {record})")]
    ReconstructionFailed { trial: usize, record: String },
    #[error("transition matrix is bipartite; no unique limiting distribution")]
    Bipartite,
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("invalid restart bound parameters: {0}")]
    InvalidBound(String),
    #[error("edge list parse error on line {line}: {msg}")]
    EdgeListParse { line: usize, msg: String },
    #[error("walk parse error on line {line}: {msg}")]
    WalkParse { line: usize, msg: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
