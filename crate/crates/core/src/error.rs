use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index out of range: {0}")]
    InvalidIndex(String),

    #[error("symmetric tridiagonal eigen-solve did not converge for {0} nodes")]
    EigenSolve(usize),

    #[error("non-finite integrand value {value} at node {node}")]
    NonFinite { node: usize, value: f64 },

    #[error("plan degree {plan} exceeds expansion degree {table}")]
    DegreeExceeded { plan: usize, table: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
