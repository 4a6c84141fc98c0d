use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("density matrix trace {trace} deviates from 1")]
    BadTrace { trace: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("fidelity {0} lies outside [0, 1] beyond tolerance")]
    FidelityOutOfRange(f64),

    #[error("symplectic dimension must be even and at least {min}, got {got}")]
    BadSymplecticDimension { got: usize, min: usize },

    #[error("Kraus operator count {m} is outside 1..={max}")]
    BadKrausCount { m: usize, max: usize },

    #[error("completeness relation violated (max deviation {deviation:e})")]
    Incomplete { deviation: f64 },

    #[error("Kraus frame invariants violated (max deviation {deviation:e})")]
    InvalidFrame { deviation: f64 },

    #[error("expected {expected} angles, got {found}")]
    AngleCount { expected: usize, found: usize },

    #[error("noise strength {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("{0}")]
    InvalidChannel(String),

    #[error("state ensemble is empty")]
    EmptyEnsemble,

    #[error("loss is not finite at iteration {iteration}")]
    NonFiniteLoss { iteration: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    /// Process exit status for the command-line front end:
    /// 1 for usage, configuration and file errors, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io { .. } | Error::Json { .. } => 1,
            Error::ProbabilityOutOfRange(_) | Error::InvalidChannel(_) => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json { context: context.into(), source }
    }
}
