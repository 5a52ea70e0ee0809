use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1, got {0}")]
    InvalidDegree(u32),

    #[error("field of order {p}^{h} exceeds the configured limit of {limit} elements")]
    FieldTooLarge { p: u32, h: u32, limit: u64 },

    #[error("prime {0} is too large for byte-sized code symbols")]
    AlphabetTooLarge(u32),

    #[error("element does not belong to GF({p}^{h})")]
    MixedField { p: u32, h: u32 },

    #[error("zero vector has no projective point")]
    ZeroVector,

    #[error("{what}: needs {needed}, budget allows {cap}")]
    BudgetExceeded { what: &'static str, needed: u128, cap: u128 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector is not a codeword of the code")]
    NotInCode,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("malformed interval: {0}")]
    MalformedInterval(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
