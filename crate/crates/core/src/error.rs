use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operation `{0}` is not supported on the {1} field")]
    UnsupportedOperation(&'static str, &'static str),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("real grids are incompatible: {0}")]
    GridMismatch(String),
    #[error("invalid radius: {0}")]
    InvalidRadius(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("experiment misconfigured: {0}")]
    WrongExperiment(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
