use thiserror::Error;

/// Failures surfaced by the numerical layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("state outside the model domain: {0}")]
    Domain(String),

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("no intersection found: {0}")]
    NoIntersection(String),

    #[error("orbit is not hyperbolic at E = {energy:e} (trace {trace})")]
    NotHyperbolic { energy: f64, trace: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
