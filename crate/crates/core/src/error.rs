use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Rejected input: bad chain parameters, empty region, out-of-range cut.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A decomposition broke down or produced a result violating its
    /// structural guarantees.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code for this error: 2 for validation, 1 for numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::Numerical(_) => 1,
        }
    }
}
