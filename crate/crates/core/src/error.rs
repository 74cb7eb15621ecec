use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("evaluation error: {0}")]
    Evaluation(String),
    #[error("unknown function {name:?}; valid names: {}", valid.join(", "))]
    UnknownFunction { name: String, valid: Vec<String> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{function}: exceptional parameters, integer-valued: {}", conditions.join(", "))]
    Exceptional {
        function: String,
        conditions: Vec<String>,
    },
    #[error("structure error: {0}")]
    Structure(String),
    #[error("{function}: degenerate case: {detail}")]
    Degenerate { function: String, detail: String },
    #[error("not found: {0}")]
    NotFound(String),
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
