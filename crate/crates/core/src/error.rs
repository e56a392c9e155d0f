use thiserror::Error;

/// Errors raised while building or evaluating a scenario.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input data (tables, permutations, files).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A structural axiom failed; the message names the violated condition.
    #[error("{0}")]
    Axiom(String),

    /// The operation needs abelian coefficients.
    #[error("coefficients must be abelian: {0}")]
    NonAbelian(String),

    /// Requested degree exceeds the configured bound.
    #[error("degree {degree} exceeds the configured bound {bound}")]
    DegreeBound { degree: usize, bound: usize },

    /// An exhaustive search would exceed its budget.
    #[error("budget exceeded: search space {needed} > budget {budget}")]
    Budget { needed: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
