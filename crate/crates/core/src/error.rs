use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("invalid domain: {0}")]
    Domain(String),
    #[error("Riccati solution blows up at z = {z}")]
    Blowup { z: f64 },
    #[error("no sign change in bracket: {0}")]
    Bracket(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("branches do not cover [0, D/2]: {0}")]
    Coverage(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("solvability condition violated at order {order}")]
    Solvability { order: usize },
    #[error("unstable step: {0}")]
    Stability(String),
    #[error("flow did not reach tolerance, final distance {distance:e}")]
    NoConvergence { distance: f64 },
    #[error("ordering violated at z = {z}, t = {t}")]
    OrderingViolation { z: f64, t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
