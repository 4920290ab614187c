use thiserror::Error;

/// Errors raised when a parameter falls outside its physical domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must satisfy {bound} (got {value})")]
    OutOfRange {
        name: &'static str,
        bound: &'static str,
        value: f64,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("quadrature did not converge: refinement changed the result by {change:e} (tolerance {tolerance:e})")]
    QuadratureNotConverged { change: f64, tolerance: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check(
    ok: bool,
    name: &'static str,
    bound: &'static str,
    value: f64,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, bound, value })
    }
}

/// Channel energy must be finite and non-negative.
pub(crate) fn check_energy(n: f64) -> Result<()> {
    check(n.is_finite() && n >= 0.0, "n", "0 <= n < inf", n)
}

/// Entanglement fraction must lie in [0, 1).
pub(crate) fn check_fraction(beta: f64) -> Result<()> {
    check(
        beta.is_finite() && (0.0..1.0).contains(&beta),
        "beta",
        "0 <= beta < 1",
        beta,
    )
}
