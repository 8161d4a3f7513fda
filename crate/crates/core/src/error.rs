use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: classes live on X_{left} and X_{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("cannot parse divisor class {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid radicand {0}: expected a non-square integer >= 2")]
    InvalidRadicand(BigInt),

    #[error("unsupported radicand {0}: Pell divisors are only defined for r = 10")]
    UnsupportedRadicand(u64),

    #[error("invalid point indices: {0}")]
    InvalidIndex(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("characteristic {prime} must be a prime larger than the degree {degree}")]
    Characteristic { prime: u64, degree: u64 },

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("invalid anchor: {0}")]
    InvalidAnchor(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("orbit walk left the effective region: {0}")]
    OrbitStrategy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
