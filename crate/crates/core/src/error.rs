use thiserror::Error;

/// Errors produced by the spectral routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver ran out of iterations. The last bracket is kept so
    /// callers can decide whether it is good enough.
    #[error("no convergence after {iterations} iterations, last bracket [{lo}, {hi}]")]
    Convergence { iterations: usize, lo: f64, hi: f64 },

    /// A lattice-point enumeration would exceed the configured term budget.
    #[error("capacity exceeded: about {estimate:.3e} lattice points, limit {limit:.3e}")]
    Capacity { estimate: f64, limit: f64 },

    /// Adaptive quadrature could not reach the requested accuracy.
    #[error("quadrature did not reach tolerance: estimated error {error:.3e}")]
    Quadrature { error: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable code, used in sweep manifests.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Convergence { .. } => "convergence",
            Error::Capacity { .. } => "capacity",
            Error::Quadrature { .. } => "quadrature",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
