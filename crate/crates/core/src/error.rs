use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A kernel was evaluated at a point where it is singular.
    #[error("kernel singularity: {0}")]
    Singularity(&'static str),

    /// Target too close to the symmetry axis for the off-axis kernel.
    #[error("target radius {r} is below the axis guard {floor}; use the axis formula")]
    AxisGuard { r: f64, floor: f64 },

    #[error("quadrature did not converge after {panels} panels (estimated error {error:e})")]
    OracleFailure { panels: usize, error: f64 },

    #[error("initial profile has empty support at this resolution")]
    EmptySystem,

    #[error("invalid particle {index}: {reason}")]
    InvalidParticle { index: usize, reason: &'static str },

    #[error("non-finite velocity at particle {index} (t = {time})")]
    Integration { index: usize, time: f64 },

    #[error("filament model invalid: {0}")]
    ModelValidity(String),

    #[error("rings collided at t = {time}")]
    Collision { time: f64 },

    #[error("power-law fit: {0}")]
    Fit(String),

    #[error("config: {0}")]
    Config(String),

    /// Malformed or unusable input file or data.
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[cfg(feature = "cli")]
    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        domain,
    }
}
