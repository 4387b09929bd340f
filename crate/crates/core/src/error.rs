use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Operands whose dimensions or layouts do not line up.
    #[error("shape error: {0}")]
    Shape(String),
    /// A result would exceed the configured maximum dimension.
    #[error("size error: dimension {dim} exceeds maximum {max}")]
    Size { dim: usize, max: usize },
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn shape<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}
