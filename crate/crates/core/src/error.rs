//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An iterative numerical routine failed to converge. Carries whatever
    /// diagnostic the routine could report (residual norms, energy history).
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A closed-form expression was evaluated outside its real domain.
    #[error("domain error at t = {t}: {message}")]
    Domain { t: f64, message: String },

    /// 0/0 in a coupling ratio with no resolvable limit.
    #[error("singular coupling at t = {t}: {message}")]
    Singularity { t: f64, message: String },

    /// Invariant eigensystem denominators vanished (eigenvalue collision).
    #[error("degenerate invariant configuration at t = {t}: {message}")]
    Degenerate { t: f64, message: String },

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("scheme synthesis failure: {0}")]
    Synthesis(String),

    /// Requested controls cannot be realized by the lattice (arcsine domain).
    #[error("control infeasible: {0}")]
    ControlInfeasible(String),

    #[error("integrator failure: {0}")]
    IntegratorFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
