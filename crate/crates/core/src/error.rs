use thiserror::Error;

/// Errors raised by the polyhedral kernel and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("{0} is unbounded")]
    Unbounded(&'static str),

    #[error("resource cap exceeded: {what} needs {requested}, limit is {limit}")]
    ResourceCap { what: &'static str, requested: u128, limit: u128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not supported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { context, expected, found });
    }
    Ok(())
}
