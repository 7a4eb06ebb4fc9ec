use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("expected a strictly positive value: {0}")]
    NonPositive(String),

    #[error("dimension mismatch: expected {expected}, found {found} ({context})")]
    DimensionMismatch { expected: usize, found: usize, context: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("grid has {cells} cells, above the cap of {cap}")]
    GridTooLarge { cells: String, cap: u64 },

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("axes ({i}, {j}) do not violate the key integrality condition")]
    NotAViolation { i: usize, j: usize },

    #[error("three-brick family needs R >= 4, got {0}")]
    InvalidFamilyParameter(u64),

    #[error("cannot lift: {0}")]
    InvalidLift(String),
}
