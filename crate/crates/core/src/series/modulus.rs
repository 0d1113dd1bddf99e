//! Second-order comparison between the modulus ψ = (log φ)' of the curved model and the
//! Euclidean-type modulus f(x) = -(π/D) tan(πx/D) + ((n-1)/2) tn_K(x).
//!
//! Through order K², ψ - f = ((n-1)(n-3)/24) K² B(x) with B(x) = (D/π)³ h'(πx/D),
//! h(ξ) = ξ(ξ² - π²/4) tan ξ + 3ξ²/2.

use crate::grid::uniform;
use crate::kernels::tn_unchecked;
use crate::model::ModelParams;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

/// Taylor coefficients of h'(π/2 - ε) in ε, orders 1..=8.
const NEAR_HALF: [f64; 8] = [
    -(PI * PI / 3.0 + 1.0),
    1.5 * PI,
    -(4.0 / 3.0 + 2.0 * PI * PI / 45.0),
    PI / 6.0,
    -(2.0 / 15.0 + 2.0 * PI * PI / 315.0),
    PI / 45.0,
    -(16.0 / 945.0 + 4.0 * PI * PI / 4725.0),
    PI / 350.0,
];

/// h'(ξ) on [0, π/2], with the two 1/(π/2 - ξ) singular parts cancelled analytically near π/2.
pub fn h_prime(xi: f64) -> f64 {
    let e = FRAC_PI_2 - xi;
    if e < 0.1 {
        return NEAR_HALF.iter().rev().fold(0.0, |acc, c| (acc + c) * e);
    }
    let (s, c) = xi.sin_cos();
    let t = s / c;
    let pi2 = PI * PI / 4.0;
    (3.0 * xi * xi - pi2) * t + xi * (xi * xi - pi2) / (c * c) + 3.0 * xi
}

/// The K² bracket B(x) for diameter D.
pub fn bracket(x: f64, d: f64) -> f64 {
    (d / PI).powi(3) * h_prime(PI * x / d)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModulusSample {
    pub x: f64,
    pub bracket: f64,
    /// ψ - f through order K².
    pub difference: f64,
    pub f: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModulusReport {
    pub params: ModelParams,
    /// (n-1)(n-3)/24 · K².
    pub prefactor: f64,
    pub samples: Vec<ModulusSample>,
    pub bracket_at_zero: f64,
    /// dB/dx at 0 = (D/π)² (3 - π²/2).
    pub bracket_slope_at_zero: f64,
    /// Limit of B as x → D/2.
    pub bracket_limit_at_half: f64,
    pub bracket_min: f64,
    pub sign_changes: usize,
    pub negative_near_zero: bool,
}

pub fn modulus_expansion(params: &ModelParams, intervals: usize) -> ModulusReport {
    let d = params.d;
    let prefactor = params.nm1() * (params.nm1() - 2.0) / 24.0 * params.k * params.k;
    let xs = uniform(0.0, params.half(), intervals);
    let samples: Vec<ModulusSample> = xs
        .iter()
        .map(|&x| {
            let b = bracket(x, d);
            let f = if x < params.half() {
                -(PI / d) * (PI * x / d).tan() + 0.5 * params.nm1() * tn_unchecked(x, params.k)
            } else {
                f64::NEG_INFINITY
            };
            ModulusSample { x, bracket: b, difference: prefactor * b, f }
        })
        .collect();
    let mut sign_changes = 0;
    let mut last = 0.0f64;
    for s in &samples {
        if s.bracket.abs() < 1e-300 {
            continue;
        }
        if last != 0.0 && s.bracket.signum() != last.signum() {
            sign_changes += 1;
        }
        last = s.bracket;
    }
    let bracket_min = samples.iter().fold(f64::INFINITY, |m, s| m.min(s.bracket));
    ModulusReport {
        params: *params,
        prefactor,
        bracket_at_zero: bracket(0.0, d),
        bracket_slope_at_zero: (d / PI).powi(2) * (3.0 - PI * PI / 2.0),
        bracket_limit_at_half: bracket(params.half(), d),
        bracket_min,
        sign_changes,
        negative_near_zero: samples.get(1).is_some_and(|s| s.bracket < 0.0),
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(xi: f64) -> f64 {
        xi * (xi * xi - PI * PI / 4.0) * xi.tan() + 1.5 * xi * xi
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &xi in &[0.2, 0.9, 1.4, 1.5, 1.52] {
            let e = 1e-5;
            let fd = (h(xi + e) - h(xi - e)) / (2.0 * e);
            assert!((h_prime(xi) - fd).abs() < 1e-6, "{xi}");
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        let xi = FRAC_PI_2 - 0.1;
        let (s, c) = xi.sin_cos();
        let pi2 = PI * PI / 4.0;
        let direct = (3.0 * xi * xi - pi2) * s / c + xi * (xi * xi - pi2) / (c * c) + 3.0 * xi;
        let series = NEAR_HALF.iter().rev().fold(0.0, |acc, c| (acc + c) * 0.1);
        assert!((direct - series).abs() < 1e-10);
    }

    #[test]
    fn reference_values_at_pi() {
        // 30-digit values of h' at D = π
        for &(x, v) in &[(0.5, -0.877808746682620), (1.0, -1.197136446088626), (1.5, -0.280703803948009)] {
            assert!((bracket(x, PI) - v).abs() < 1e-12, "{x}: {}", bracket(x, PI));
        }
    }

    #[test]
    fn n3_has_no_correction() {
        let r = modulus_expansion(&ModelParams::new(3, 0.5, 1.0).unwrap(), 64);
        assert!(r.samples.iter().all(|s| s.difference == 0.0));
    }

    #[test]
    fn shape_of_the_bracket() {
        let p = ModelParams::new(5, 0.2, 2.0).unwrap();
        let r = modulus_expansion(&p, 400);
        assert_eq!(r.bracket_at_zero, 0.0);
        assert!(r.bracket_slope_at_zero < 0.0);
        assert!(r.negative_near_zero);
        assert_eq!(r.sign_changes, 0);
        assert!(r.bracket_limit_at_half.abs() < 1e-12);
        assert!(r.bracket_min.is_finite());
    }
}
