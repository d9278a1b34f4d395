use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// One or more configuration invariants are violated.
    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("energy {0} outside band support")]
    OutsideBand(f64),

    #[error("ground level is degenerate (gap {gap:e})")]
    DegenerateGround { gap: f64 },

    /// Numerical integration failed an internal consistency check.
    #[error("integration failure: {0}")]
    Integration(String),

    #[error("fit failure: {reason} (residual {residual:e})")]
    Fit { reason: String, residual: f64 },

    #[error("i/o error at {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Whether the error stems from user input rather than from a numerical
    /// failure. The CLI maps the two classes to different exit codes.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Domain(_) | Error::Io { .. })
    }
}
