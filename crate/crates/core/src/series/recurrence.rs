//! Order-by-order solution of `-y'' + A sec²(√K x) y = μ y` on [-π/2, π/2] (the shifted
//! normal form at D = π) in powers of K, with A = (n-1)(n-3)/4.
//!
//! At order m: y_m'' + ω² y_m = Σ_{i<m} A a_i x^{2i} y_{m-1-i} - Σ_{1≤i≤m} μ_i y_{m-i},
//! where a_i are the sec² Taylor coefficients; μ_m is fixed by orthogonality to the base mode.

use super::dimpoly::NPoly;
use super::pilaurent::{q, PiLaurent, Q};
use super::trigpoly::{solve_resonant, Basis, TrigPoly};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub const DEFAULT_ORDER_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    First,
    Second,
}

impl Branch {
    pub fn omega(self) -> u32 {
        match self {
            Branch::First => 1,
            Branch::Second => 2,
        }
    }

    pub fn basis(self) -> Basis {
        match self {
            Branch::First => Basis::Cos,
            Branch::Second => Basis::Sin,
        }
    }

    pub fn index(self) -> u8 {
        self.omega() as u8
    }
}

/// Exact Taylor coefficients of sec²x = Σ a_m x^{2m}, from tan' = 1 + tan².
pub fn sec2_coeffs(max_order: usize) -> Vec<Q> {
    let len = 2 * max_order + 2;
    let mut t = vec![Q::zero(); len + 1];
    t[1] = q(1, 1);
    for k in 1..len {
        let mut s = Q::zero();
        for i in 0..=k {
            if !t[i].is_zero() && !t[k - i].is_zero() {
                s += &t[i] * &t[k - i];
            }
        }
        t[k + 1] = s / q(k as i64 + 1, 1);
    }
    (0..=max_order).map(|m| &t[2 * m + 1] * q(2 * m as i64 + 1, 1)).collect()
}

#[derive(Debug, Clone)]
pub struct SeriesOrder {
    pub order: usize,
    /// μ_m, coefficient of K^m of the shifted eigenvalue at D = π.
    pub lambda: NPoly,
    /// y_m, the eigenfunction correction.
    pub y: TrigPoly,
}

#[derive(Debug, Clone)]
pub struct SeriesResult {
    pub branch: Branch,
    pub orders: Vec<SeriesOrder>,
}

impl SeriesResult {
    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }

    /// Coefficient of K^m of λ̄ itself at D = π: μ_m minus the (n-1)²/4 shift at m = 1.
    pub fn unscaled(&self, m: usize) -> NPoly {
        let l = self.orders[m].lambda.clone();
        if m == 1 {
            &l - &NPoly::from_rationals(&[q(1, 4), q(-1, 2), q(1, 4)])
        } else {
            l
        }
    }

    /// Coefficient of κ^m in D² λ̄, κ = K D².
    pub fn kappa_coeff(&self, m: usize) -> NPoly {
        self.unscaled(m).shift_pi(2 - 2 * m as i32)
    }

    pub fn kappa_coeffs(&self) -> Vec<NPoly> {
        (0..self.orders.len()).map(|m| self.kappa_coeff(m)).collect()
    }
}

pub fn lambda_series(branch: Branch, max_order: usize) -> Result<SeriesResult> {
    lambda_series_capped(branch, max_order, DEFAULT_ORDER_CAP)
}

pub fn lambda_series_capped(branch: Branch, max_order: usize, cap: usize) -> Result<SeriesResult> {
    if max_order > cap {
        return Err(Error::Domain(format!("series order {max_order} exceeds the cap {cap}")));
    }
    let omega = branch.omega();
    let base = TrigPoly::mode(branch.basis(), omega, q(1, 1));
    let a = NPoly::a_factor();
    let sec2 = sec2_coeffs(max_order);
    let mut orders = vec![SeriesOrder {
        order: 0,
        lambda: NPoly::rational(q((omega * omega) as i64, 1)),
        y: base.clone(),
    }];
    for m in 1..=max_order {
        let mut rhs = TrigPoly::zero();
        for i in 0..m {
            let mut xp = vec![NPoly::zero(); 2 * i + 1];
            xp[2 * i] = a.scale(&sec2[i]);
            rhs = &rhs + &orders[m - 1 - i].y.mul_poly(&xp);
        }
        for i in 1..m {
            rhs = &rhs - &orders[m - i].y.scale(&orders[i].lambda);
        }
        // ∫ base² = π/2
        let lam = (&rhs * &base).integrate().shift_pi(-1).scale(&q(2, 1));
        let forcing = &rhs - &base.scale(&lam);
        let y = solve_resonant(&forcing, omega, branch.basis()).map_err(|_| Error::Solvability { order: m })?;
        if !y.eval_half_pi().is_zero() {
            return Err(Error::Solvability { order: m });
        }
        orders.push(SeriesOrder { order: m, lambda: lam, y });
    }
    Ok(SeriesResult { branch, orders })
}

/// κ-coefficients of D²(λ̄₂ - λ̄₁).
pub fn gap_series(max_order: usize) -> Result<Vec<NPoly>> {
    let (a, b) = branch_pair(max_order)?;
    Ok((0..=max_order).map(|m| &b.kappa_coeff(m) - &a.kappa_coeff(m)).collect())
}

/// Both branches, computed in parallel.
pub fn branch_pair(max_order: usize) -> Result<(SeriesResult, SeriesResult)> {
    let (a, b) = rayon::join(
        || lambda_series(Branch::First, max_order),
        || lambda_series(Branch::Second, max_order),
    );
    Ok((a?, b?))
}

fn dim_poly_dd(p: &NPoly, n: u32) -> Dd {
    let mut acc = Dd::ZERO;
    for c in p.coeffs().iter().rev() {
        acc = acc * Dd::new(n as f64) + c.to_dd();
    }
    acc
}

/// S_M = D⁻² Σ_{m ≤ M} c_m κ^m in double-double.
pub fn eval_kappa_series_dd(coeffs: &[NPoly], params: &ModelParams, max_order: usize) -> Dd {
    let kappa = Dd::new(params.k) * Dd::new(params.d) * Dd::new(params.d);
    let mut acc = Dd::ZERO;
    for c in coeffs[..=max_order].iter().rev() {
        acc = acc * kappa + dim_poly_dd(c, params.n);
    }
    acc / (Dd::new(params.d) * Dd::new(params.d))
}

/// Truncated series for λ̄₁ or λ̄₂ at (n, K, D).
pub fn eval_series(params: &ModelParams, branch: Branch, max_order: usize) -> Result<f64> {
    let s = lambda_series(branch, max_order)?;
    Ok(eval_kappa_series_dd(&s.kappa_coeffs(), params, max_order).to_f64())
}

/// Exact value of an n-polynomial at integer n.
pub fn at_dimension(p: &NPoly, n: i64) -> PiLaurent {
    p.eval(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::dimpoly::NPoly;

    fn pl(t: &[(i32, i64, i64)]) -> PiLaurent {
        PiLaurent::from_terms(&t.iter().map(|&(e, a, b)| (e, q(a, b))).collect::<Vec<_>>())
    }

    #[test]
    fn sec2_known() {
        let a = sec2_coeffs(5);
        let expect = [q(1, 1), q(1, 1), q(2, 3), q(17, 45), q(62, 315), q(1382, 14175)];
        assert_eq!(a, expect);
    }

    #[test]
    fn first_order_is_trivial_correction() {
        let s = lambda_series(Branch::First, 1).unwrap();
        assert_eq!(s.orders[1].lambda, NPoly::a_factor());
        assert!(s.orders[1].y.is_zero());
        assert_eq!(s.unscaled(1), NPoly::from_rationals(&[q(1, 2), q(-1, 2)]));
    }

    #[test]
    fn second_order_eigenfunction() {
        let s = lambda_series(Branch::First, 2).unwrap();
        let u24 = NPoly::u_factor().scale(&q(1, 24));
        let x = |j: usize, c: PiLaurent| {
            let mut v = vec![NPoly::zero(); j + 1];
            v[j] = u24.scale_pi(&c);
            v
        };
        let expect = &(&TrigPoly::term(Basis::Sin, 1, x(3, PiLaurent::one()))
            + &TrigPoly::term(Basis::Cos, 1, x(2, pl(&[(0, 3, 2)]))))
            + &TrigPoly::term(Basis::Sin, 1, x(1, pl(&[(2, -1, 4)])));
        assert_eq!(s.orders[2].y, expect);
        assert_eq!(s.orders[2].lambda, u24.scale_pi(&pl(&[(2, 1, 2), (0, -3, 1)])));
    }

    #[test]
    fn structure_at_every_order() {
        for branch in [Branch::First, Branch::Second] {
            let s = lambda_series(branch, 6).unwrap();
            for o in &s.orders[1..] {
                assert!(o.y.eval_half_pi().is_zero());
                if branch == Branch::First {
                    assert!(o.y.is_even());
                } else {
                    assert!(o.y.is_odd());
                }
                // normalization: no constant multiple of the base mode
                let part = o.y.part(branch.basis(), branch.omega());
                assert!(part.first().is_none_or(|c| c.is_zero()));
            }
        }
    }

    #[test]
    fn n3_truncates() {
        let s = lambda_series(Branch::First, 6).unwrap();
        for m in 2..=6 {
            assert!(s.kappa_coeff(m).eval(3).is_zero());
            assert!(s.kappa_coeff(m).eval(1).is_zero());
        }
        let p = ModelParams::new(3, 0.3, 1.7).unwrap();
        let v = eval_series(&p, Branch::First, 6).unwrap();
        assert!((v - (p.base() - 0.3)).abs() < 1e-13);
    }

    #[test]
    fn order_cap() {
        assert!(lambda_series(Branch::First, 9).is_err());
        assert!(lambda_series_capped(Branch::First, 9, 10).is_ok());
    }
}
