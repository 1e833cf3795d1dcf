use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("out of bounds: {0}")]
    Bounds(String),
    #[error("configuration mismatch: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("unbound generator `{0}`")]
    Lookup(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
