use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bad token {0:?}")]
    BadToken(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch: expected D({expected_m},{expected_n}), got D({m},{n})")]
    DimensionMismatch {
        expected_m: usize,
        expected_n: usize,
        m: usize,
        n: usize,
    },

    #[error("duplicate word {0}")]
    DuplicateWord(String),

    #[error("selector out of range: {0}")]
    SelectorOutOfRange(String),

    #[error("code has fewer than two words")]
    TooFewWords,

    #[error("u and v must be distinct")]
    SameVertex,

    #[error("not a coclique: {0}")]
    NotACoclique(String),

    #[error("not an MDS code: {0}")]
    NotMds(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("structural check failed: {0}")]
    Structure(String),

    #[error("node budget of {budget} exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64, budget: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
