//! Double-double eigenvalues for small curvature via the Taylor series of the eigenfunction
//! about s = 0. Used where f64 shooting cannot resolve differences below ~1e-12.
//!
//! With τ = tan(√K s)/√K, sec²(√K s) = τ' = 1 + Kτ², so the coefficients of V follow from
//! (j+1) τ_{j+1} = δ_{j0} + K Σ τ_i τ_{j-i}. The eigenfunction coefficients follow from
//! φ_{j+2} (j+2)(j+1) = Σ (V - λ)_i φ_{j-i}, and Newton's method on λ uses the λ-derivative.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use std::f64::consts::PI;

const TERMS: usize = 220;

fn potential_coeffs(p: &ModelParams) -> Vec<Dd> {
    let k = Dd::new(p.k);
    let nm1 = Dd::new(p.nm1());
    let shift = -(nm1 * nm1 * k) / 4.0;
    let amp = nm1 * Dd::new(p.nm1() - 2.0) * k / 4.0;
    let mut tau = vec![Dd::ZERO; TERMS + 2];
    tau[1] = Dd::ONE;
    for j in 1..=TERMS {
        let mut s = Dd::ZERO;
        for i in 0..=j {
            if tau[i].hi != 0.0 && tau[j - i].hi != 0.0 {
                s = s + tau[i] * tau[j - i];
            }
        }
        tau[j + 1] = k * s / (j as f64 + 1.0);
    }
    let mut v: Vec<Dd> = (0..TERMS).map(|j| amp * tau[j + 1] * (j as f64 + 1.0)).collect();
    v[0] = v[0] + shift;
    v
}

/// φ(D/2; λ) and ∂φ/∂λ(D/2; λ) for the even (index 1) or odd (index 2) solution.
fn endpoint(v: &[Dd], lambda: Dd, index: u8, half: Dd) -> (Dd, Dd) {
    let mut w = v.to_vec();
    w[0] = w[0] - lambda;
    let mut phi = vec![Dd::ZERO; TERMS];
    let mut chi = vec![Dd::ZERO; TERMS];
    if index == 1 {
        phi[0] = Dd::ONE;
    } else {
        phi[1] = Dd::ONE;
    }
    for j in 0..TERMS - 2 {
        let mut a = Dd::ZERO;
        let mut b = Dd::ZERO;
        for i in 0..=j {
            if w[i].hi == 0.0 {
                continue;
            }
            a = a + w[i] * phi[j - i];
            b = b + w[i] * chi[j - i];
        }
        let den = ((j + 2) * (j + 1)) as f64;
        phi[j + 2] = a / den;
        chi[j + 2] = (b - phi[j]) / den;
    }
    let mut f = Dd::ZERO;
    let mut g = Dd::ZERO;
    for j in (0..TERMS).rev() {
        f = f * half + phi[j];
        g = g * half + chi[j];
    }
    (f, g)
}

/// λ̄_index in double-double, refined by Newton from `guess`.
pub fn precise_eigenvalue(params: &ModelParams, index: u8, guess: f64) -> Result<Dd> {
    let p = params.validate()?;
    if p.kappa().abs() > 2.0 {
        return Err(Error::Domain(format!(
            "series solver is limited to |K D^2| <= 2, got {}",
            p.kappa()
        )));
    }
    if index != 1 && index != 2 {
        return Err(Error::Domain(format!("eigenvalue index {index} not in {{1, 2}}")));
    }
    let v = potential_coeffs(&p);
    let half = Dd::new(p.d) / 2.0;
    let mut lambda = Dd::new(guess);
    for _ in 0..30 {
        let (f, g) = endpoint(&v, lambda, index, half);
        let step = f / g;
        lambda = lambda - step;
        if step.abs().to_f64() <= 1e-30 * lambda.abs().to_f64().max(PI) {
            return Ok(lambda);
        }
    }
    Err(Error::NonConvergence("Newton iteration for the series eigenvalue stalled".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_potential_cases() {
        let d = 1.0;
        let b = Dd::PI * Dd::PI / Dd::new(d * d);
        let p = ModelParams::new(3, 0.01, d).unwrap();
        let l = precise_eigenvalue(&p, 1, 9.8).unwrap();
        assert!((l - (b - Dd::new(0.01))).to_f64().abs() < 1e-26);
        let p = ModelParams::new(5, 0.0, d).unwrap();
        let l = precise_eigenvalue(&p, 2, 39.0).unwrap();
        assert!((l - b * 4.0).to_f64().abs() < 1e-25);
    }

    #[test]
    fn agrees_with_shooting() {
        let p = ModelParams::new(5, 0.4, 1.3).unwrap();
        for index in [1u8, 2] {
            let s = crate::spectral::eigen_shoot(&p, index).unwrap().eigenvalue;
            let l = precise_eigenvalue(&p, index, s).unwrap().to_f64();
            assert!(((l - s) / s).abs() < 1e-10);
        }
    }
}
