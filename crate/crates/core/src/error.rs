use thiserror::Error;

use crate::protocols::ProtocolKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("privacy budget must be positive and finite, got {0}")]
    InvalidBudget(f64),
    #[error("domain size must be at least 2, got {0}")]
    InvalidDomain(usize),
    #[error("pure parameters require 0 < q* < p* <= 1, got p* = {p_star}, q* = {q_star}")]
    InvalidPureParams { p_star: f64, q_star: f64 },
    #[error("value {value} is outside the domain [0, {d})")]
    OutOfDomain { value: usize, d: usize },
    #[error("report variant does not match protocol {0}")]
    VariantMismatch(ProtocolKind),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("{0} is not a pure protocol and has no (p*, q*)")]
    NotPure(ProtocolKind),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{path}:{line}: {message}")]
    Ingest {
        path: String,
        line: usize,
        message: String,
    },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}
