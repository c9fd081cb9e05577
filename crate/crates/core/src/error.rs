use thiserror::Error;

/// Failures shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the set where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature gave up before reaching the requested accuracy.
    #[error("tolerance not reached: estimate {estimate:e}, error bound {error_bound:e}")]
    Tolerance { estimate: f64, error_bound: f64 },

    /// A semi-infinite integrand did not decay.
    #[error("integral diverges: {0}")]
    Divergence(String),

    /// The result would overflow or underflow the supported range.
    #[error("range error: {0}")]
    Range(String),

    /// The evaluation point sits on a singularity of the kernel.
    #[error("singular point: {0}")]
    Singular(String),

    /// A computed value violates a property it must satisfy (e.g. a negative density).
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// Rejects non-positive or non-finite inputs with a domain error naming the argument.
pub(crate) fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

pub(crate) fn require_negative(name: &str, v: f64) -> Result<()> {
    if v < 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and < 0, got {v}")))
    }
}
