//! Finite sums Σ p(x) cos(m x) + q(x) sin(m x) with coefficients in NPoly, and their exact
//! integrals over [-π/2, π/2].

use super::dimpoly::NPoly;
use super::pilaurent::{q, PiLaurent, Q};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    Cos,
    Sin,
}

/// Polynomial in x, ascending powers.
pub type XPoly = Vec<NPoly>;

fn trim(mut p: XPoly) -> XPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn xcoeff(p: &XPoly, j: usize) -> NPoly {
    p.get(j).cloned().unwrap_or_default()
}

fn xadd(a: &XPoly, b: &XPoly) -> XPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| &xcoeff(a, i) + &xcoeff(b, i)).collect())
}

fn xmul(a: &XPoly, b: &XPoly) -> XPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![NPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                r[i + j] = &r[i + j] + &(x * y);
            }
        }
    }
    trim(r)
}

fn xscale(a: &XPoly, c: &NPoly) -> XPoly {
    trim(a.iter().map(|x| x * c).collect())
}

fn xscale_q(a: &XPoly, c: &Q) -> XPoly {
    trim(a.iter().map(|x| x.scale(c)).collect())
}

/// Canonical: at most one polynomial per (basis, m), no zero polynomials, no sin(0·x).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrigPoly {
    terms: BTreeMap<(Basis, u32), XPoly>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// p(x) · basis(m x).
    pub fn term(basis: Basis, m: u32, p: XPoly) -> Self {
        let mut t = Self::zero();
        t.add_term(basis, m, p);
        t
    }

    /// c · basis(m x) with a rational constant.
    pub fn mode(basis: Basis, m: u32, c: Q) -> Self {
        Self::term(basis, m, vec![NPoly::rational(c)])
    }

    /// A plain polynomial Σ c_j x^j.
    pub fn poly(p: XPoly) -> Self {
        Self::term(Basis::Cos, 0, p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Basis, u32), &XPoly)> {
        self.terms.iter()
    }

    pub fn part(&self, basis: Basis, m: u32) -> XPoly {
        self.terms.get(&(basis, m)).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, basis: Basis, m: u32, p: XPoly) {
        if basis == Basis::Sin && m == 0 {
            return;
        }
        let p = trim(p);
        if p.is_empty() {
            return;
        }
        let key = (basis, m);
        let cur = self.terms.remove(&key).unwrap_or_default();
        let s = xadd(&cur, &p);
        if !s.is_empty() {
            self.terms.insert(key, s);
        }
    }

    pub fn scale(&self, c: &NPoly) -> Self {
        let mut r = Self::zero();
        for ((b, m), p) in &self.terms {
            r.add_term(*b, *m, xscale(p, c));
        }
        r
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        let mut r = Self::zero();
        for ((b, m), p) in &self.terms {
            r.add_term(*b, *m, xscale_q(p, c));
        }
        r
    }

    /// Multiplies by a polynomial in x.
    pub fn mul_poly(&self, p: &XPoly) -> Self {
        let mut r = Self::zero();
        for ((b, m), t) in &self.terms {
            r.add_term(*b, *m, xmul(t, p));
        }
        r
    }

    pub fn derivative(&self) -> Self {
        let mut r = Self::zero();
        for ((b, m), p) in &self.terms {
            let dp: XPoly = (1..p.len()).map(|j| p[j].scale(&q(j as i64, 1))).collect();
            r.add_term(*b, *m, dp);
            if *m > 0 {
                let mm = q(*m as i64, 1);
                match b {
                    Basis::Cos => r.add_term(Basis::Sin, *m, xscale_q(p, &-mm)),
                    Basis::Sin => r.add_term(Basis::Cos, *m, xscale_q(p, &mm)),
                }
            }
        }
        r
    }

    /// True if every term is even in x (even poly · cos, odd poly · sin).
    pub fn is_even(&self) -> bool {
        self.parity_ok(0)
    }

    pub fn is_odd(&self) -> bool {
        self.parity_ok(1)
    }

    fn parity_ok(&self, want: usize) -> bool {
        self.terms.iter().all(|((b, _), p)| {
            let off = if *b == Basis::Cos { want } else { 1 - want };
            p.iter().enumerate().all(|(j, c)| c.is_zero() || j % 2 == off)
        })
    }

    /// Exact value at x = π/2.
    pub fn eval_half_pi(&self) -> NPoly {
        let mut acc = NPoly::zero();
        for ((b, m), p) in &self.terms {
            let s = match b {
                Basis::Cos => cos_quarter(*m),
                Basis::Sin => sin_quarter(*m),
            };
            if s == 0 {
                continue;
            }
            for (j, c) in p.iter().enumerate() {
                let x = half_pi_pow(j).scale(&q(s, 1));
                acc = &acc + &c.scale_pi(&x);
            }
        }
        acc
    }

    /// ∫_{-π/2}^{π/2}.
    pub fn integrate(&self) -> NPoly {
        let mut acc = NPoly::zero();
        for ((b, m), p) in &self.terms {
            let table = moments(*b, *m, p.len());
            for (j, c) in p.iter().enumerate() {
                if !c.is_zero() && !table[j].is_zero() {
                    acc = &acc + &c.scale_pi(&table[j]);
                }
            }
        }
        acc
    }
}

/// cos(mπ/2) ∈ {-1, 0, 1}.
fn cos_quarter(m: u32) -> i64 {
    [1, 0, -1, 0][(m % 4) as usize]
}

fn sin_quarter(m: u32) -> i64 {
    [0, 1, 0, -1][(m % 4) as usize]
}

/// (π/2)^j.
fn half_pi_pow(j: usize) -> PiLaurent {
    PiLaurent::monomial(Q::new(BigInt::from(1), BigInt::from(1) << j), j as i32)
}

/// ∫_{-a}^{a} x^j basis(m x) dx for j < len, a = π/2, by integration by parts:
/// C(j) = a^j sin(ma)(1 + (-1)^j)/m - (j/m) S(j-1),
/// S(j) = -a^j cos(ma)(1 - (-1)^j)/m + (j/m) C(j-1).
fn moments(basis: Basis, m: u32, len: usize) -> Vec<PiLaurent> {
    if m == 0 {
        return (0..len)
            .map(|j| match basis {
                Basis::Sin => PiLaurent::zero(),
                Basis::Cos if j % 2 == 0 => half_pi_pow(j + 1).scale(&q(2, j as i64 + 1)),
                Basis::Cos => PiLaurent::zero(),
            })
            .collect();
    }
    let mq = q(m as i64, 1);
    let sm = sin_quarter(m);
    let cm = cos_quarter(m);
    let mut c: Vec<PiLaurent> = Vec::with_capacity(len);
    let mut s: Vec<PiLaurent> = Vec::with_capacity(len);
    for j in 0..len {
        let even = j % 2 == 0;
        let aj = half_pi_pow(j);
        let mut cj = if even && sm != 0 { aj.scale(&(q(2 * sm, 1) / &mq)) } else { PiLaurent::zero() };
        let mut sj = if !even && cm != 0 { aj.scale(&(q(-2 * cm, 1) / &mq)) } else { PiLaurent::zero() };
        if j > 0 {
            let f = q(j as i64, 1) / &mq;
            cj = &cj - &s[j - 1].scale(&f);
            sj = &sj + &c[j - 1].scale(&f);
        }
        c.push(cj);
        s.push(sj);
    }
    match basis {
        Basis::Cos => c,
        Basis::Sin => s,
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, o: &TrigPoly) -> TrigPoly {
        let mut r = self.clone();
        for ((b, m), p) in &o.terms {
            r.add_term(*b, *m, p.clone());
        }
        r
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale_q(&q(-1, 1))
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, o: &TrigPoly) -> TrigPoly {
        self + &(-o)
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    /// Product-to-sum on every pair of terms.
    fn mul(self, o: &TrigPoly) -> TrigPoly {
        let half = q(1, 2);
        let mut r = TrigPoly::zero();
        for ((b1, m1), p1) in &self.terms {
            for ((b2, m2), p2) in &o.terms {
                let p = xscale_q(&xmul(p1, p2), &half);
                let (sum, diff) = (m1 + m2, m1.abs_diff(*m2));
                // sign of sin((m1 - m2) x) after folding to a nonnegative frequency
                let dsign = if m1 >= m2 { q(1, 1) } else { q(-1, 1) };
                match (b1, b2) {
                    (Basis::Cos, Basis::Cos) => {
                        r.add_term(Basis::Cos, diff, p.clone());
                        r.add_term(Basis::Cos, sum, p);
                    }
                    (Basis::Sin, Basis::Sin) => {
                        r.add_term(Basis::Cos, diff, p.clone());
                        r.add_term(Basis::Cos, sum, xscale_q(&p, &q(-1, 1)));
                    }
                    (Basis::Sin, Basis::Cos) => {
                        // sin a cos b = (sin(a+b) + sin(a-b))/2
                        r.add_term(Basis::Sin, sum, p.clone());
                        r.add_term(Basis::Sin, diff, xscale_q(&p, &dsign));
                    }
                    (Basis::Cos, Basis::Sin) => {
                        // cos a sin b = (sin(a+b) - sin(a-b))/2
                        r.add_term(Basis::Sin, sum, p.clone());
                        r.add_term(Basis::Sin, diff, xscale_q(&p, &-dsign));
                    }
                }
            }
        }
        r
    }
}

/// Particular solution of y'' + ω² y = rhs with zero constant coefficient on cos ωx and
/// sin ωx. Requires ∫ rhs · base = 0 exactly, where base is cos ωx (even) or sin ωx (odd).
pub fn solve_resonant(rhs: &TrigPoly, omega: u32, base: Basis) -> Result<TrigPoly> {
    let base_fn = TrigPoly::mode(base, omega, q(1, 1));
    if !(rhs * &base_fn).integrate().is_zero() {
        return Err(Error::Solvability { order: 0 });
    }
    let w2 = q((omega * omega) as i64, 1);
    let keys: std::collections::BTreeSet<u32> = rhs.terms.keys().map(|(_, m)| *m).collect();
    let mut y = TrigPoly::zero();
    for m in keys {
        let p = rhs.part(Basis::Cos, m);
        let qq = rhs.part(Basis::Sin, m);
        let deg = p.len().max(qq.len());
        let (u, w) = if m == omega {
            // U'' + 2ωW' = P, W'' - 2ωU' = Q, one degree up, U_0 = W_0 = 0
            let top = deg + 2;
            let mut u = vec![NPoly::zero(); top + 1];
            let mut w = vec![NPoly::zero(); top + 1];
            let tw = q(2 * omega as i64, 1);
            for j in (0..deg).rev() {
                let f = q(((j + 2) * (j + 1)) as i64, 1);
                let den = &tw * q(j as i64 + 1, 1);
                let wn = &xcoeff(&p, j) - &u[j + 2].scale(&f);
                w[j + 1] = wn.scale(&(q(1, 1) / &den));
                let un = &w[j + 2].scale(&f) - &xcoeff(&qq, j);
                u[j + 1] = un.scale(&(q(1, 1) / &den));
            }
            (u, w)
        } else {
            let delta = &w2 - &q((m * m) as i64, 1);
            let inv = q(1, 1) / delta;
            let mm = q(m as i64, 1);
            let mut u = vec![NPoly::zero(); deg + 2];
            let mut w = vec![NPoly::zero(); deg + 2];
            for j in (0..deg).rev() {
                let f = q(((j + 2) * (j + 1)) as i64, 1);
                let g = &mm * q(2 * (j as i64 + 1), 1);
                let un = &(&xcoeff(&p, j) - &u[j + 2].scale(&f)) - &w[j + 1].scale(&g);
                let wn = &(&xcoeff(&qq, j) - &w[j + 2].scale(&f)) + &u[j + 1].scale(&g);
                u[j] = un.scale(&inv);
                w[j] = wn.scale(&inv);
            }
            (u, w)
        };
        y.add_term(Basis::Cos, m, u);
        y.add_term(Basis::Sin, m, w);
    }
    let check = &(&y.derivative().derivative() + &y.scale_q(&w2)) - rhs;
    debug_assert!(check.is_zero(), "particular solution residual nonzero");
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn xp(c: &[(usize, Q)]) -> XPoly {
        let n = c.iter().map(|(j, _)| j + 1).max().unwrap_or(0);
        let mut v = vec![NPoly::zero(); n];
        for (j, x) in c {
            v[*j] = NPoly::rational(x.clone());
        }
        trim(v)
    }

    fn num(p: &NPoly) -> f64 {
        p.coeff(0).to_f64()
    }

    #[test]
    fn basic_integrals() {
        let c = TrigPoly::mode(Basis::Cos, 1, q(1, 1));
        assert_eq!((&c * &c).integrate(), NPoly::constant(PiLaurent::monomial(q(1, 2), 1)));
        let s2 = TrigPoly::mode(Basis::Sin, 2, q(1, 1));
        assert_eq!((&s2 * &s2).integrate(), NPoly::constant(PiLaurent::monomial(q(1, 2), 1)));
        let x2c2 = (&c * &c).mul_poly(&xp(&[(2, q(1, 1))]));
        let expect = PiLaurent::from_terms(&[(3, q(1, 24)), (1, q(-1, 4))]);
        assert_eq!(x2c2.integrate(), NPoly::constant(expect));
        let odd = TrigPoly::term(Basis::Cos, 3, xp(&[(1, q(1, 1)), (3, q(2, 1))]));
        assert!(odd.integrate().is_zero());
    }

    #[test]
    fn x8_cos2_integral() {
        let c = TrigPoly::mode(Basis::Cos, 1, q(1, 1));
        let t = (&c * &c).mul_poly(&xp(&[(8, q(62, 315))]));
        let expect = PiLaurent::from_terms(&[
            (1, q(362880, 1)),
            (3, q(-60480, 1)),
            (5, q(3024, 1)),
            (7, q(-72, 1)),
            (9, q(1, 1)),
        ])
        .scale(&(q(62, 315) / q(4608, 1)));
        assert_eq!(t.integrate(), NPoly::constant(expect.clone()));
        assert!((expect.to_f64() - 0.10734).abs() < 1e-5);
    }

    #[test]
    fn matches_quadrature() {
        // x^3 sin(3x) cos(2x) + x^2 cos(5x)
        let t = &TrigPoly::term(Basis::Sin, 3, xp(&[(3, q(1, 1))]))
            * &TrigPoly::mode(Basis::Cos, 2, q(1, 1));
        let t = &t + &TrigPoly::term(Basis::Cos, 5, xp(&[(2, q(1, 1))]));
        let exact = num(&t.integrate());
        let f = |x: f64| x.powi(3) * (3.0 * x).sin() * (2.0 * x).cos() + x * x * (5.0 * x).cos();
        let quad = crate::quadrature::integrate(f, -PI / 2.0, PI / 2.0, 1e-14);
        assert!((exact - quad).abs() < 1e-12);
    }

    #[test]
    fn resonant_forcing_is_rejected() {
        let rhs = TrigPoly::mode(Basis::Cos, 1, q(3, 1));
        assert!(matches!(solve_resonant(&rhs, 1, Basis::Cos), Err(Error::Solvability { .. })));
        assert!(solve_resonant(&TrigPoly::zero(), 1, Basis::Cos).unwrap().is_zero());
    }

    #[test]
    fn resonant_and_nonresonant_solutions_satisfy_ode() {
        // x² cos x - c cos x with c = ∫x²cos²/∫cos² passes the Fredholm check
        let c = PiLaurent::from_terms(&[(2, q(1, 12)), (0, q(-1, 2))]);
        let rhs = &TrigPoly::term(Basis::Cos, 1, xp(&[(2, q(1, 1))]))
            - &TrigPoly::term(Basis::Cos, 1, vec![NPoly::constant(c)]);
        let rhs = &rhs + &TrigPoly::term(Basis::Cos, 3, xp(&[(0, q(1, 1))]));
        let y = solve_resonant(&rhs, 1, Basis::Cos).unwrap();
        let res = &(&y.derivative().derivative() + &y) - &rhs;
        assert!(res.is_zero());
        assert!(y.is_even());
        assert!(y.part(Basis::Cos, 1).first().is_none_or(|c| c.is_zero()));
    }

    #[test]
    fn half_pi_evaluation() {
        let t = &TrigPoly::term(Basis::Sin, 1, xp(&[(2, q(1, 1))]))
            + &TrigPoly::mode(Basis::Cos, 2, q(3, 1));
        let v = t.eval_half_pi();
        let expect = PiLaurent::from_terms(&[(2, q(1, 4)), (0, q(-3, 1))]);
        assert_eq!(v, NPoly::constant(expect));
    }
}
