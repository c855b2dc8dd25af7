use thiserror::Error;

/// Failures surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size {n} exceeds the exhaustive enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("the external node has no predecessor")]
    EmptyTree,

    #[error("malformed tree code: {0}")]
    MalformedCode(String),

    #[error("segment count {k} is outside 1..={n}")]
    DomainError { n: usize, k: usize },

    #[error("no positive root of phi(x) = x*phi'(x) below {bound}")]
    NoRoot { bound: String },

    #[error("invalid characteristic polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("rational function has a pole at {0}")]
    Pole(String),
}

pub type Result<T> = std::result::Result<T, Error>;
