use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at offset {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degree of the zero element is undefined")]
    EmptyElement,

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("spanning set exceeds size cap {cap}")]
    BoundExceeded { cap: usize },

    #[error("rewriting requires d(xi) with constant coefficients; {0}")]
    NonLinearXi(String),

    #[error("rewrite budget of {0} steps exhausted")]
    StepBudgetExhausted(usize),
}

impl Error {
    pub(crate) fn parse(pos: usize, message: impl Into<String>) -> Self {
        Error::Parse { pos, message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
