use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("radicand mismatch: {0} vs {1}")]
    RadicandMismatch(u64, u64),
    #[error("radicand must be positive")]
    ZeroRadicand,
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("expected weighted degree {expected}, found {found}")]
    WrongDegree { expected: i64, found: i64 },
    #[error("polynomial must not involve w")]
    InvolvesW,
    #[error("coefficient denominator is divisible by {0}")]
    BadReduction(u64),
    #[error("not submaximal: eps must lie in [0, sqrt({0}))")]
    NotSubmaximal(u64),
    #[error("hypothesis unmet: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("trace replay failed at step {step}: {reason}")]
    Replay { step: usize, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
