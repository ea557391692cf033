use thiserror::Error;

/// Errors raised by the arithmetic and certificate routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("coefficient is not {prime}-integral")]
    NotPIntegral { prime: String },
    #[error("polynomial vanishes identically modulo {prime}")]
    DegenerateReduction { prime: String },
    #[error("not a square in Q_{prime}")]
    NotASquare { prime: String },
    #[error("non-integral coefficient in {0}")]
    IntegralityViolation(String),
    #[error("elimination chain degenerate in all tried coordinate systems")]
    NonGenericCoordinates,
    #[error("all Brauer representatives vanish at the point")]
    Indeterminate,
    #[error("Brauer representatives disagree: {0}")]
    InconsistentRepresentatives(String),
    #[error("cannot conclude at {0}")]
    CannotConclude(String),
    #[error("no point found: {0}")]
    NotFound(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: msg.into(),
        }
    }
}
