use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),

    /// Kepler iteration failed to reach tolerance (pathological inputs).
    #[error("Kepler solver did not converge: e={eccentricity}, M={mean_anomaly}")]
    KeplerDivergence { eccentricity: f64, mean_anomaly: f64 },

    #[error("input domain: {0}")]
    InputDomain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("QP problem is infeasible")]
    QpInfeasible,

    #[error("QP problem is unbounded below")]
    QpUnbounded,

    #[error("malformed QP problem: {0}")]
    QpBadProblem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
