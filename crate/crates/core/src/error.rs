use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A mode with vanishing quasiparticle energy was hit.
    #[error("critical mode k = {k}: quasiparticle energy is zero")]
    Singularity { k: usize },

    #[error("normal phase only: lambda = {lambda} is not below the critical coupling {critical}")]
    PhaseDomain { lambda: f64, critical: f64 },

    #[error("matrix is not symmetric positive-definite")]
    NotPositiveDefinite,

    #[error("resource limit: {0}")]
    Resource(String),

    #[error(
        "quadrature did not converge on [{lo}, {hi}]: error estimate {estimate:e} after {evaluations} evaluations"
    )]
    Quadrature { lo: f64, hi: f64, estimate: f64, evaluations: usize },

    #[error("fit error: {0}")]
    Fit(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
