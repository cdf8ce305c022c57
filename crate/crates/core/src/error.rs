use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("vertex {vertex} out of range for order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("color {color} out of range at ({row}, {col}); palette has {color_count} colors")]
    ColorOutOfRange {
        row: usize,
        col: usize,
        color: u32,
        color_count: u32,
    },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("inconsistent partition: {0}")]
    InconsistentPartition(String),

    #[error("duplicate fix vertex {0}")]
    DuplicateFix(usize),

    #[error("refinement did not stabilize within {0} rounds")]
    RoundCapExceeded(usize),

    #[error("unsupported refinement dimension {0}")]
    UnsupportedDimension(u8),

    #[error("stage coloring is not discrete")]
    NotDiscrete,

    #[error("no fixable vertex: partition is discrete")]
    NoCandidate,

    #[error("oracle refuses order {n} above limit {max_n}")]
    OracleLimit { n: usize, max_n: usize },

    #[error("malformed window: {0}")]
    MalformedWindow(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
