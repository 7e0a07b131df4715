use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("division by a non-unit in Z_{p}")]
    NonUnitDivision { p: u64 },
    #[error("pole: {0}")]
    Pole(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("tail not certified: {0}")]
    InsufficientTail(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
