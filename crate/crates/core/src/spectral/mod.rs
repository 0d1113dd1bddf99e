//! First and second Dirichlet eigenvalues of `-ϕ'' + V ϕ = λ ϕ` on `[-D/2, D/2]`.

mod ball;
mod fd;
pub mod precise;
mod shoot;

pub use ball::ball_first_eigen;
pub use fd::{eigen_fd, fd_eigenvalue, sturm_count};
pub use shoot::{eigen_shoot, eigen_shoot_nonnormal, eigen_shoot_with, symmetry_residual, ShootOptions};

use crate::error::Result;
use crate::grid::GridFunction;
use crate::model::ModelParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Shooting,
    FiniteDifference,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenResult {
    pub eigenvalue: f64,
    pub index: u8,
    pub method: Method,
    pub error_estimate: f64,
    /// Finite differences only: the value on the finer grid before extrapolation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unextrapolated: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenfunction: Option<GridFunction>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapResult {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
    /// gap - 3π²/D².
    pub excess: f64,
    pub error_estimate: f64,
}

/// λ̄₂ - λ̄₁ by shooting, with its offset from 3π²/D².
pub fn gap(params: &ModelParams) -> Result<GapResult> {
    let l1 = eigen_shoot(params, 1)?;
    let l2 = eigen_shoot(params, 2)?;
    let g = l2.eigenvalue - l1.eigenvalue;
    Ok(GapResult {
        lambda1: l1.eigenvalue,
        lambda2: l2.eigenvalue,
        gap: g,
        excess: g - 3.0 * params.base(),
        error_estimate: l1.error_estimate + l2.error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gap_signs() {
        let g = gap(&ModelParams::new(3, 0.8, 1.7).unwrap()).unwrap();
        assert!((g.gap / (3.0 * PI * PI / 1.7f64.powi(2)) - 1.0).abs() < 1e-9);
        let g = gap(&ModelParams::new(2, 1.0, 1.0).unwrap()).unwrap();
        assert!(g.excess < -10.0 * g.error_estimate);
        let g = gap(&ModelParams::new(5, 1.0, 1.0).unwrap()).unwrap();
        assert!(g.excess > 10.0 * g.error_estimate);
    }
}
