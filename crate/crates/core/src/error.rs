use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent configuration (sizes, contour geometry, time grids).
    #[error("configuration error: {0}")]
    Config(String),

    /// A self-convergence certificate failed.
    #[error("accuracy certificate failed for {what}: |delta| = {delta:.3e} > {tol:.1e}")]
    Accuracy { what: String, delta: f64, tol: f64 },

    /// An iterative method did not converge.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// An invariant of a simulation was violated.
    #[error("internal consistency violated: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {x}")))
    }
}
