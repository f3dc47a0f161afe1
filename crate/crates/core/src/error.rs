use thiserror::Error;

/// Errors raised by the constant engine, the geometry layer and the verifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension out of range: {0}")]
    InvalidDimension(String),

    #[error("argument out of supported range: {0}")]
    OutOfRange(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("parameter outside the admissible domain: {0}")]
    Domain(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("log-space value {log_value:.3} cannot be converted to a plain float")]
    Overflow { log_value: f64 },

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("heat series truncation {truncation} too small for t = {t}; use at least {suggested}")]
    TailBound {
        truncation: usize,
        t: f64,
        suggested: usize,
    },

    #[error("rejected test function: {0}")]
    RejectedFunction(String),

    #[error("quadrature rule too large: {0} nodes")]
    RuleTooLarge(usize),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
