use std::path::PathBuf;
use thiserror::Error;

/// Command-level errors. Every documented failure mode has its own message
/// and exit code; success is always exit 0, and nothing is written to disk
/// on any error path.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("cannot {action} {path}: {source}")]
    Io {
        action: &'static str,
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse matrix file {path}: {message}")]
    ParseMatrix { path: PathBuf, message: String },
    #[error("cannot parse vector file {path}: {message}")]
    ParseVector { path: PathBuf, message: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("zero matrix: {0}")]
    ZeroMatrix(String),
    #[error("zero vector: {0}")]
    ZeroVector(String),
    #[error("singular circulant: |lambda[{index}]| = {modulus:e} is not above threshold {threshold:e}")]
    Singular {
        index: usize,
        modulus: f64,
        threshold: f64,
    },
    #[error("dimension {n} exceeds the materialization cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error(transparent)]
    Core(qtoeplitz::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::ParseMatrix { .. } | CliError::ParseVector { .. } => 4,
            CliError::Dimension(_) => 5,
            CliError::ZeroMatrix(_) => 6,
            CliError::ZeroVector(_) => 7,
            CliError::Singular { .. } => 8,
            CliError::CapExceeded { .. } => 9,
        }
    }
}

impl From<qtoeplitz::Error> for CliError {
    fn from(e: qtoeplitz::Error) -> Self {
        use qtoeplitz::Error as E;
        match e {
            E::DimensionMismatch { expected, got } => {
                CliError::Dimension(format!("matrix expects dimension {expected}, vector has {got}"))
            }
            E::ZeroMatrix | E::ZeroSpectrum => {
                CliError::ZeroMatrix("the all-zero matrix cannot be run through the circuit".into())
            }
            E::ZeroVector | E::EmptyVector => {
                CliError::ZeroVector("the input vector must have a nonzero entry".into())
            }
            E::SingularCirculant {
                index,
                modulus,
                threshold,
            } => CliError::Singular {
                index,
                modulus,
                threshold,
            },
            E::OracleCapExceeded { dim, cap } => CliError::CapExceeded { n: dim, cap },
            E::ZeroShots => CliError::Usage("shot count must be positive".into()),
            E::NonPositiveStep(h) => CliError::Usage(format!("step size h must be positive, got {h}")),
            E::DimensionTooSmall { min, got } => {
                CliError::Usage(format!("dimension must be at least {min}, got {got}"))
            }
            other => CliError::Core(other),
        }
    }
}
