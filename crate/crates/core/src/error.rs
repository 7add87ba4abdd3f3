use thiserror::Error;

/// Errors produced anywhere in the clustering pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no edges in input")]
    NoEdges,

    #[error("non-binary cell {value:?} at row {row:?}, column {column:?}")]
    NonBinaryCell {
        row: String,
        column: String,
        value: String,
    },

    #[error("row {row:?} has {found} cells, expected {expected}")]
    RaggedRow {
        row: String,
        found: usize,
        expected: usize,
    },

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("cast code {code} outside 0-9 (member {member:?}, bill {bill:?})")]
    InvalidCastCode { member: String, bill: String, code: i64 },

    #[error("member {member:?} voted more than once on bill {bill:?}")]
    DuplicateVote { member: String, bill: String },

    #[error("self-loop on node {0:?}")]
    SelfLoop(String),

    #[error("adjacency is not symmetric between nodes {0} and {1}")]
    Asymmetric(usize, usize),

    #[error("infeasible hypergeometric arguments: k={k}, n_i={n_i}, n_j={n_j}, total={total}")]
    InfeasibleCounts {
        k: usize,
        n_i: usize,
        n_j: usize,
        total: usize,
    },

    #[error("need at least 2 items, got {0}")]
    TooFewItems(usize),

    #[error("non-finite dissimilarity at pair ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("empty partition")]
    EmptyPartition,

    #[error("partitions cover different node sets ({0} vs {1} nodes)")]
    UniverseMismatch(usize, usize),

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("{0} clusters is too many for exhaustive matching; use the greedy strategy")]
    TooManyClusters(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("malformed dendrogram: {0}")]
    MalformedDendrogram(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
