use thiserror::Error;

/// Errors produced by graph loading, metric evaluation and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("node {0} is not assigned to any community")]
    Unassigned(usize),

    #[error("node {0} is out of range")]
    NodeOutOfRange(usize),

    #[error("community {0} does not exist")]
    UnknownCommunity(usize),

    #[error("node {node} is already a member of community {community}")]
    AlreadyMember { node: usize, community: usize },

    #[error("cannot merge community {0} with itself")]
    SelfMerge(usize),

    #[error(
        "degenerate contingency table (omega={omega}, epsilon={epsilon}, d={degree}, N={big_n})"
    )]
    Degenerate {
        omega: usize,
        epsilon: usize,
        degree: usize,
        big_n: usize,
    },

    #[error("invalid contingency table: {0}")]
    InvalidTable(String),

    #[error("a graph needs at least two nodes for this metric")]
    TooFewNodes,

    #[error("graph has no edges; modularity is undefined")]
    NoEdges,

    #[error("nodes without a label: {0:?}")]
    MissingLabels(Vec<u64>),

    #[error("labels for unknown nodes: {0:?}")]
    UnknownNodes(Vec<u64>),

    #[error("partitions do not cover the same nodes; uncovered: {0:?}")]
    CoverageMismatch(Vec<u64>),

    #[error("node {0} appears in more than one community")]
    DuplicateNode(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
