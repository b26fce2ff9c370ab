use thiserror::Error;

/// Errors raised while constructing or configuring a DSU.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DsuError {
    #[error("element count must be at least 1")]
    Empty,
    #[error("element count {0} does not fit the packed slot encoding (limit 2^63 - 1)")]
    TooLarge(u64),
    #[error("multiplier {prime} shares a factor with n = {n}; the priority map would not be a permutation")]
    NotCoprime { prime: u64, n: u64 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Errors raised by graph loaders and generators.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("input contains no edges")]
    EmptyInput,
    #[error("missing `p sp <n> <m>` header")]
    MissingHeader,
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: u64, n: usize },
    #[error("graph has {0} vertices; at most 2^32 - 1 are supported")]
    TooManyVertices(u64),
    #[error("graph has no edge weights")]
    Unweighted,
    #[error("graph with {0} edges is too large for this workload")]
    TooManyEdges(usize),
    #[error("invalid generator parameters: {0}")]
    Generator(String),
}

/// Errors raised while configuring or running an experiment.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Dsu(#[from] DsuError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
}
