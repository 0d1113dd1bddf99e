//! Comparison lower bounds and Rayleigh-quotient upper bounds for λ̄₁ and λ̄₂.

use crate::error::{Error, Result};
use crate::kernels::sec2;
use crate::model::ModelParams;
use crate::quadrature::integrate;
use serde::Serialize;
use std::f64::consts::PI;

pub const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    /// sec² ≥ 1 in the quadratic form.
    Comparison,
    /// cos(πx/D) or sin(2πx/D) as test function, integral by quadrature.
    Rayleigh,
    /// Rayleigh with the sec² minorant 1 + t² + 2t⁴/3 + 17t⁶/45, closed form (n = 2).
    ExplicitQuartic,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub index: u8,
    pub lower: Option<f64>,
    pub lower_method: Option<BoundMethod>,
    pub upper: f64,
    pub upper_method: BoundMethod,
}

impl BoundReport {
    pub fn contains(&self, lambda: f64, slack: f64) -> bool {
        self.lower.is_none_or(|l| l <= lambda + slack) && lambda <= self.upper + slack
    }
}

fn check_index(index: u8) -> Result<f64> {
    match index {
        1 | 2 => Ok(f64::from(index * index)),
        _ => Err(Error::Domain(format!("bounds are available for index 1 and 2, got {index}"))),
    }
}

fn check_curved(params: &ModelParams) -> Result<()> {
    if params.k <= 0.0 {
        return Err(Error::Hypothesis(format!("bounds need K > 0, got K = {}", params.k)));
    }
    Ok(())
}

/// λ̄ᵢ ≥ i²π²/D² - (n-1)K/2, valid for K > 0 and n ≥ 3.
pub fn lambda_lower(params: &ModelParams, index: u8) -> Result<f64> {
    let m2 = check_index(index)?;
    let p = params.validate()?;
    check_curved(&p)?;
    if p.n < 3 {
        return Err(Error::Hypothesis(format!("the comparison lower bound needs n >= 3, got n = {}", p.n)));
    }
    Ok(m2 * p.base() - p.nm1() * p.k / 2.0)
}

/// Rayleigh quotient of cos(πx/D) (index 1) or sin(2πx/D) (index 2).
pub fn lambda_upper_rayleigh(params: &ModelParams, index: u8) -> Result<f64> {
    let m2 = check_index(index)?;
    let p = params.validate()?;
    check_curved(&p)?;
    let w = PI / p.d;
    let coupling = p.nm1() * (p.nm1() - 2.0) * p.k / p.d;
    let integral = if coupling == 0.0 {
        0.0
    } else if index == 1 {
        integrate(|x| sec2(x, p.k) * (w * x).cos().powi(2), 0.0, p.half(), QUAD_TOL)
    } else {
        integrate(|x| sec2(x, p.k) * (2.0 * w * x).sin().powi(2), 0.0, p.half(), QUAD_TOL)
    };
    Ok(m2 * p.base() - p.nm1() * p.nm1() * p.k / 4.0 + coupling * integral)
}

/// Closed-form n = 2 upper bound for λ̄₁ or λ̄₂ (quartic in K).
pub fn explicit_n2_upper(params: &ModelParams, index: u8) -> Result<f64> {
    check_index(index)?;
    let p = params.validate()?;
    check_curved(&p)?;
    if p.n != 2 {
        return Err(Error::Hypothesis(format!("the explicit bound is for n = 2, got n = {}", p.n)));
    }
    let (d, k) = (p.d, p.k);
    let (p2, p4, p6) = (PI * PI, PI.powi(4), PI.powi(6));
    let (d2, d4, d6) = (d * d, d.powi(4), d.powi(6));
    let v = if index == 1 {
        p2 / d2 - k / 2.0
            - (p2 - 6.0) * d2 * k * k / (48.0 * p2)
            - (120.0 - 20.0 * p2 + p4) * d4 * k.powi(3) / (480.0 * p4)
            - 17.0 * (p6 - 42.0 * p4 + 840.0 * p2 - 5040.0) * d6 * k.powi(4) / (80640.0 * p6)
    } else {
        4.0 * p2 / d2 - k / 2.0
            - (p2 - 1.5) * d2 * k * k / (48.0 * p2)
            - (7.5 - 5.0 * p2 + p4) * d4 * k.powi(3) / (480.0 * p4)
            - 17.0 * (4.0 * p6 - 42.0 * p4 + 210.0 * p2 - 315.0) * d6 * k.powi(4) / (322560.0 * p6)
    };
    Ok(v)
}

/// Both explicit n = 2 bounds, with no lower side.
pub fn explicit_n2_bounds(params: &ModelParams) -> Result<[BoundReport; 2]> {
    let make = |index| -> Result<BoundReport> {
        Ok(BoundReport {
            index,
            lower: None,
            lower_method: None,
            upper: explicit_n2_upper(params, index)?,
            upper_method: BoundMethod::ExplicitQuartic,
        })
    };
    Ok([make(1)?, make(2)?])
}

/// Rayleigh upper bound plus the comparison lower bound when n ≥ 3.
pub fn bound_report(params: &ModelParams, index: u8) -> Result<BoundReport> {
    let upper = lambda_upper_rayleigh(params, index)?;
    let lower = if params.n >= 3 { Some(lambda_lower(params, index)?) } else { None };
    Ok(BoundReport {
        index,
        lower,
        lower_method: lower.map(|_| BoundMethod::Comparison),
        upper,
        upper_method: BoundMethod::Rayleigh,
    })
}
