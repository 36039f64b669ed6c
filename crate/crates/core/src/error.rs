use thiserror::Error;

/// Errors produced by tree ingestion and the solvers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("node id {id} out of range for {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },

    #[error("path length overflow: root-to-node length exceeds 2^61")]
    LengthOverflow,

    #[error("weight sum overflow")]
    WeightOverflow,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance too large for brute force: n = {n} > {max}")]
    TooLarge { n: usize, max: usize },

    #[error("tree is not binary: node {0} has more than two children")]
    NotBinary(usize),

    #[error("oracle is not monotone: {0}")]
    NonMonotoneOracle(String),

    #[error("polyline: {0}")]
    Polyline(String),

    #[error("partition invalid: {0}")]
    Partition(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
