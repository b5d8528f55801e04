//! Error type shared by every module of the crate.

/// Errors reported by the analytic and numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter lies outside the domain the routine is defined on.
    #[error("parameter `{name}` out of domain: {value}")]
    ParameterDomain {
        /// Parameter name as it appears in the API.
        name: &'static str,
        /// Offending value.
        value: f64,
    },

    /// The series for `g` needs more working precision than allowed.
    #[error("series needs {required_bits} bits of working precision, cap is {cap_bits}")]
    PrecisionOverflow {
        /// Bits the evaluation would need.
        required_bits: u64,
        /// Configured upper limit.
        cap_bits: u64,
    },

    /// A quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    QuadratureNotConverged {
        /// Best error estimate reached.
        achieved: f64,
        /// Requested tolerance.
        requested: f64,
    },

    /// The Green-function oracle produced a non-negligible imaginary part.
    #[error("imaginary residual {residual:e} exceeds tolerance")]
    ImaginaryResidual {
        /// Magnitude of the imaginary part.
        residual: f64,
    },

    /// The spectral-efficiency curves never change order inside the window.
    #[error("no crossover between {lo_db} dB and {hi_db} dB")]
    NoCrossing {
        /// Lower end of the search window.
        lo_db: f64,
        /// Upper end of the search window.
        hi_db: f64,
    },

    /// A direct summation would exceed the configured evaluation budget.
    #[error("evaluation budget exceeded: {requested} > {budget}")]
    BudgetExceeded {
        /// Number of evaluations requested.
        requested: u64,
        /// Configured budget.
        budget: u64,
    },

    /// Two fields or grids that must match do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
}

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::ParameterDomain { name, value })
    }
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::ParameterDomain { name, value })
    }
}
