use thiserror::Error;

/// Errors raised by the solver and its experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates a precondition. `path` is the
    /// dotted key path of the offending field (e.g. `grid.N`).
    #[error("{path}: {message}")]
    Config { path: String, message: String },

    /// Several configuration violations collected at once.
    #[error("invalid configuration:\n{}", .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    ConfigList(Vec<Error>),

    /// A parameter lies outside the domain where the object exists.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Newton inversion of the momentum map failed to converge.
    /// `trace` holds the residual norm after each iteration.
    #[error(
        "newton iteration did not converge after {iterations} iterations (residuals: {trace:?})"
    )]
    NewtonFailure { iterations: usize, trace: Vec<f64> },

    /// A computed number was NaN or infinite where a finite value is required.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
