use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range (limit {limit})")]
    Index { index: usize, limit: usize },

    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("refusing {what} on {n_qubits} qubits (limit {limit})")]
    TooLarge {
        what: &'static str,
        n_qubits: usize,
        limit: usize,
    },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("{what} did not converge after {iterations} iterations (best residual {best_residual:.3e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        best_residual: f64,
        history: Vec<f64>,
    },

    #[error("self-consistent iteration is not contracting (residuals {history:?}); try damping < 1")]
    Oscillation { history: Vec<f64> },

    #[error("state norm drifted by {drift:.3e}")]
    NormDrift { drift: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// Errors caused by bad user input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Index { .. }
                | Error::Dimension { .. }
                | Error::Domain(_)
                | Error::Invalid(_)
                | Error::TooLarge { .. }
                | Error::Format(_)
        )
    }
}
