use thiserror::Error;

/// Errors raised by the pricing-kernel library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (time ordering,
    /// horizon guard, empty grids).
    #[error("domain error: {0}")]
    Domain(String),

    /// A model or specification parameter violates its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    QuadratureNonConvergence { estimate: f64, error_bound: f64 },

    /// A conditional expectation does not exist (Gaussian tilt with
    /// non-positive precision, non-finite integrand).
    #[error("integrand diverges: {0}")]
    Divergence(String),

    /// An exponent exceeded the overflow cap.
    #[error("range error: exponent {exponent} exceeds cap {cap}")]
    Range { exponent: f64, cap: f64 },

    #[error("posterior is not normalizable at t={t}, ell={ell}")]
    NonNormalizablePosterior { t: f64, ell: f64 },

    #[error("bracket too narrow: |h|*density = {residual:e} at z = {at}")]
    BracketTooNarrow { at: f64, residual: f64 },

    #[error("too many sign changes in exercise boundary scan: {0}")]
    TooManySignChanges(usize),

    /// Finite-difference step failed the Richardson consistency test.
    #[error("finite-difference step too large: Richardson error estimate {estimate:e}")]
    StepTooLarge { estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
