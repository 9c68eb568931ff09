//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular matrix: {context}")]
    SingularMatrix { context: String },
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(crate::theorems::HypothesisReport),
    #[error("theorem soundness violation in {theorem}: {details}")]
    SoundnessViolation { theorem: String, details: String },
    #[error("exact mode supports N in {{1,2,4}}, got N={n}; use the numeric module")]
    UnsupportedRootOrder { n: u32 },
    #[error("point {index} is not on the sphere of squared radius {radius_sq}")]
    NotOnSphere { index: usize, radius_sq: String },
    #[error("dimension d={got} too small, need d > {min}")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("need at least {required} generators, got {got}")]
    TooFewGenerators { required: usize, got: usize },
    #[error("invalid random vector spec: {0}")]
    InvalidSpec(String),
    #[error("non-finite function value at grid point {index}")]
    NonFiniteValue { index: usize },
    #[error("characteristic-function magnitude {magnitude} below trusted floor 0.1 at point {index}")]
    MagnitudeFloor { index: usize, magnitude: f64 },
    #[error("sample too small: n={n}, need at least {min}")]
    SampleTooSmall { n: usize, min: usize },
    #[error("{what} = {value} outside allowed range (limit {limit})")]
    OutOfRange {
        what: String,
        value: f64,
        limit: f64,
    },
    #[error("empty input: {0}")]
    EmptyInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
