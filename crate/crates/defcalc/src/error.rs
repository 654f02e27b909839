use thiserror::Error;

/// Errors shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("degree or budget exceeded: {0}")]
    DegreeBudgetExceeded(String),
    #[error("composition of differentials is nonzero")]
    CompositionNonzero,
    #[error("not a differential: d^2 != 0")]
    NotADifferential,
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

pub(crate) fn check(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Check(msg.into()))
    }
}
