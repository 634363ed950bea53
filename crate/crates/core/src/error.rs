use thiserror::Error;

/// Errors raised by curve construction, valuation and fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CreditError {
    /// An argument lies outside the domain of the operation (negative tenor, zero horizon, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input (empty curve, unsorted pillars, out-of-range parameter).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A one-dimensional root search could not bracket a sign change.
    #[error("no root bracketed for {what} in [{lo}, {hi}]")]
    NoBracket { what: String, lo: f64, hi: f64 },

    /// An iterative method ran out of iterations.
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: String, iterations: usize },
}

pub type Result<T, E = CreditError> = std::result::Result<T, E>;

pub(crate) fn ensure_finite(value: f64, name: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(CreditError::InvalidInput(format!("{name} must be finite, got {value}")))
    }
}
