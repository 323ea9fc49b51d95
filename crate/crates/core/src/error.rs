use thiserror::Error;

/// Errors raised by the graphon and variational routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// (e, t) outside the attainable region of edge/triangle densities.
    #[error("region error: {0}")]
    Region(String),
    /// Graphon values touch 0 or 1 where strict interiority is required.
    #[error("boundary error: {0}")]
    Boundary(String),
    #[error("convergence error: {message} (best residual {best_residual:.3e})")]
    Convergence { message: String, best_residual: f64 },
    /// Input too large for an exponential-time scan.
    #[error("size error: {0}")]
    Size(String),
    /// No graph on n vertices has edge density inside the requested shell.
    #[error("empty shell: {0}")]
    EmptyShell(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn convergence(message: impl Into<String>, best_residual: f64) -> Self {
        Error::Convergence { message: message.into(), best_residual }
    }
}
