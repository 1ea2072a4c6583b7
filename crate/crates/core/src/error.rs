use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector must be non-empty")]
    EmptyVector,
    #[error("vector entry {index} is not finite")]
    NonFiniteEntry { index: usize },
    #[error("vector must have at least one nonzero entry")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("diagonal offset {offset} lies outside [{min}, {max}]")]
    OffsetOutOfRange { offset: i64, min: i64, max: i64 },
    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("defining array must have even length of at least 2, got {0}")]
    BadDefiningArrayLength(usize),
    #[error("defining array centre entry (index {index}) must vanish, found modulus {modulus:e}")]
    NonzeroDefiningCentre { index: usize, modulus: f64 },
    #[error("the zero matrix cannot be run through the circuit")]
    ZeroMatrix,
    #[error("zero operator has no dilation scale")]
    ZeroSpectrum,
    #[error("base dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("dense materialization of dimension {dim} exceeds the oracle cap {cap}")]
    OracleCapExceeded { dim: usize, cap: usize },
    #[error(
        "circulant is singular: |lambda[{index}]| = {modulus:e} is not above threshold {threshold:e}"
    )]
    SingularCirculant {
        index: usize,
        modulus: f64,
        threshold: f64,
    },
    #[error("square-root scale convention requires max |lambda| <= 1, got {0}")]
    ScaleOutOfDomain(f64),
    #[error("shot count must be positive")]
    ZeroShots,
    #[error("step size h must be positive, got {0}")]
    NonPositiveStep(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
