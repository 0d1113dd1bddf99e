//! The one-dimensional model problem
//! `φ'' - (n-1) tn_K(s) φ' + λ φ = 0` on `[-D/2, D/2]` and its Schrödinger normal form
//! `-ϕ'' + V ϕ = λ ϕ`, related by `ϕ = cs_K^{(n-1)/2} φ`.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::kernels::{cs, tn};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u32,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

impl ModelParams {
    /// Builds and validates.
    pub fn new(n: u32, k: f64, d: f64) -> Result<Self> {
        Self { n, k, d }.validate()
    }

    pub fn validate(self) -> Result<Self> {
        if self.n < 1 {
            return Err(Error::Domain(format!("dimension n = {} must be at least 1", self.n)));
        }
        if !(self.d > 0.0) || !self.d.is_finite() {
            return Err(Error::Domain(format!("diameter D = {} must be positive", self.d)));
        }
        if !self.k.is_finite() {
            return Err(Error::Domain(format!("curvature K = {} must be finite", self.k)));
        }
        if self.k > 0.0 && self.kappa() >= PI * PI {
            return Err(Error::Pole(format!(
                "K D^2 = {} must stay below pi^2 for K > 0",
                self.kappa()
            )));
        }
        Ok(self)
    }

    /// κ = K D².
    pub fn kappa(&self) -> f64 {
        self.k * self.d * self.d
    }

    pub fn half(&self) -> f64 {
        0.5 * self.d
    }

    /// π²/D².
    pub fn base(&self) -> f64 {
        PI * PI / (self.d * self.d)
    }

    pub fn nm1(&self) -> f64 {
        self.n as f64 - 1.0
    }

    pub fn potential(&self) -> Potential {
        let nm1 = self.nm1();
        Potential {
            k: self.k,
            shift: -nm1 * nm1 * self.k / 4.0,
            amp: nm1 * (nm1 - 2.0) * self.k / 4.0,
        }
    }

    /// True when V is constant (n = 1, n = 3 or K = 0).
    pub fn potential_is_constant(&self) -> bool {
        self.n == 1 || self.n == 3 || self.k == 0.0
    }
}

/// `V(s) = shift + amp / cs_K(s)²`.
#[derive(Debug, Clone, Copy)]
pub struct Potential {
    k: f64,
    shift: f64,
    amp: f64,
}

impl Potential {
    pub fn eval(&self, s: f64) -> f64 {
        if self.amp == 0.0 {
            return self.shift;
        }
        let c = cs(s, self.k);
        self.shift + self.amp / (c * c)
    }

    /// Value at s = 0, the minimum when amp ≥ 0.
    pub fn at_center(&self) -> f64 {
        self.shift + self.amp
    }

    pub fn min_on(&self, half: f64) -> f64 {
        self.at_center().min(self.eval(half))
    }

    pub fn max_on(&self, half: f64) -> f64 {
        self.at_center().max(self.eval(half))
    }
}

/// φ'' from the non-normal form: (n-1) tn_K(s) φ' - λ φ.
pub fn model_rhs(s: f64, phi: f64, dphi: f64, lambda: f64, params: &ModelParams) -> Result<f64> {
    Ok(params.nm1() * tn(s, params.k)? * dphi - lambda * phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// φ ↦ cs^{(n-1)/2} φ.
    ToNormalForm,
    /// ϕ ↦ cs^{-(n-1)/2} ϕ.
    FromNormalForm,
}

pub fn gauge_transform(f: &GridFunction, params: &ModelParams, dir: Gauge) -> GridFunction {
    let e = 0.5 * params.nm1();
    let y = f
        .x
        .iter()
        .zip(&f.y)
        .map(|(&s, &v)| {
            if e == 0.0 || params.k == 0.0 {
                return v;
            }
            let w = cs(s, params.k).powf(e);
            match dir {
                Gauge::ToNormalForm => v * w,
                Gauge::FromNormalForm => v / w,
            }
        })
        .collect();
    GridFunction::new(f.x.clone(), y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validation() {
        assert!(ModelParams::new(3, 1.0, PI / 2.0).is_ok());
        assert!(matches!(ModelParams::new(2, 1.0, PI), Err(Error::Pole(_))));
        assert!(ModelParams::new(5, 0.0, 10.0).is_ok());
        assert!(matches!(ModelParams::new(0, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::new(2, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::new(2, 0.0, -1.0), Err(Error::Domain(_))));
        assert!(ModelParams::new(2, -50.0, 3.0).is_ok());
    }

    #[test]
    fn potential_values() {
        let v = ModelParams::new(3, 0.7, 2.0).unwrap().potential();
        for s in [-1.0, 0.0, 0.3, 1.0] {
            assert_eq!(v.eval(s), -0.7);
        }
        let v = ModelParams::new(1, 0.7, 2.0).unwrap().potential();
        assert_eq!(v.eval(0.5), 0.0);
        let v = ModelParams::new(2, 1.0, 1.0).unwrap().potential();
        assert!((v.eval(0.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn rhs_values() {
        let p = ModelParams::new(2, 1.0, 2.0).unwrap();
        assert!((model_rhs(PI / 4.0, 1.0, 1.0, 0.0, &p).unwrap() - 1.0).abs() < 1e-15);
        let p = ModelParams::new(1, 1.0, 2.0).unwrap();
        assert_eq!(model_rhs(0.3, 2.0, 5.0, 3.0, &p).unwrap(), -6.0);
        let p = ModelParams::new(4, 0.0, 2.0).unwrap();
        assert_eq!(model_rhs(0.3, 2.0, 5.0, 3.0, &p).unwrap(), -6.0);
    }

    #[test]
    fn gauge_special_cases() {
        let f = GridFunction::sample(-1.0, 1.0, 16, |s| 1.0 + s * s);
        let p = ModelParams::new(5, 0.0, 2.0).unwrap();
        assert_eq!(gauge_transform(&f, &p, Gauge::ToNormalForm), f);
        let p = ModelParams::new(1, 0.9, 2.0).unwrap();
        assert_eq!(gauge_transform(&f, &p, Gauge::ToNormalForm), f);
        let p = ModelParams::new(3, 1.0, 2.0).unwrap();
        let g = gauge_transform(&f, &p, Gauge::ToNormalForm);
        assert_eq!(g.y[8], f.y[8]);
        assert!((g.y[3] - f.y[3] * f.x[3].cos()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn gauge_round_trip(n in 1u32..12, k in -3.0f64..2.4, d in 0.1f64..2.0) {
            let p = ModelParams::new(n, k, d).unwrap();
            let f = GridFunction::sample(-d / 2.0, d / 2.0, 32, |s| (3.0 * s).sin() + 2.0);
            let g = gauge_transform(&gauge_transform(&f, &p, Gauge::ToNormalForm), &p, Gauge::FromNormalForm);
            for (a, b) in f.y.iter().zip(&g.y) {
                prop_assert!((a - b).abs() <= 1e-13 * a.abs());
            }
        }

        #[test]
        fn potential_even_and_bounded_below(n in 4u32..12, k in 0.01f64..2.0, d in 0.1f64..2.0) {
            prop_assume!(k * d * d < 9.0);
            let p = ModelParams::new(n, k, d).unwrap();
            let v = p.potential();
            let nm1 = p.nm1();
            for i in 0..=20 {
                let s = d / 2.0 * i as f64 / 20.0;
                prop_assert_eq!(v.eval(s), v.eval(-s));
                let lhs = v.eval(s) + nm1 * nm1 * k / 4.0;
                let floor = nm1 * (nm1 - 2.0) * k / 4.0;
                if i == 0 {
                    prop_assert!((lhs - floor).abs() <= 1e-12 * floor);
                } else {
                    prop_assert!(lhs > floor);
                }
            }
        }
    }
}
