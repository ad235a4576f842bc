use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The initial velocity is outside the band of periodic orbits.
    #[error("periodic-band violation: |v| = {v} must be below v_max = {v_max}")]
    PeriodicBand { v: f64, v_max: f64 },

    /// The time `t` is too large for the renormalization step `n`.
    #[error("window error: {0}")]
    Window(String),

    /// The potential does not have a nondegenerate elliptic equilibrium.
    #[error("invalid potential: {0}")]
    Potential(String),

    /// Failure inside the ODE integrator.
    #[error("integration failure: {0}")]
    Integration(String),

    /// A root could not be bracketed or refined.
    #[error("root finding failed: {0}")]
    Root(String),

    /// A descriptor or flag could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
