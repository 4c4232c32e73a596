use thiserror::Error;

/// Errors reported by the algebra engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("variant mismatch: {0}")]
    VariantMismatch(String),
    #[error("not an E(1)-module map: {0}")]
    NotEquivariant(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("invalid differential: {0}")]
    InvalidDifferential(String),
    #[error("input outside the domain: {0}")]
    OutOfDomain(String),
    #[error("series not divisible: {0}")]
    NotDivisible(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
