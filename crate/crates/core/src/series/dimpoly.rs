//! Polynomials in the dimension n with PiLaurent coefficients.

use super::pilaurent::{q, PiLaurent, Q};
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Σ c_d n^d, with no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NPoly(Vec<PiLaurent>);

impl NPoly {
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn constant(c: PiLaurent) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn rational(c: Q) -> Self {
        Self::constant(PiLaurent::rational(c))
    }

    pub fn from_coeffs(mut c: Vec<PiLaurent>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self(c)
    }

    /// From rational coefficients in ascending degree.
    pub fn from_rationals(c: &[Q]) -> Self {
        Self::from_coeffs(c.iter().map(|x| PiLaurent::rational(x.clone())).collect())
    }

    /// A = (n-1)(n-3)/4.
    pub fn a_factor() -> Self {
        Self::from_rationals(&[q(3, 4), q(-1, 1), q(1, 4)])
    }

    /// u = (n-1)(n-3).
    pub fn u_factor() -> Self {
        Self::from_rationals(&[q(3, 1), q(-4, 1), q(1, 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[PiLaurent] {
        &self.0
    }

    pub fn coeff(&self, d: usize) -> PiLaurent {
        self.0.get(d).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_coeffs(self.0.iter().map(|x| x.scale(c)).collect())
    }

    pub fn scale_pi(&self, c: &PiLaurent) -> Self {
        Self::from_coeffs(self.0.iter().map(|x| x * c).collect())
    }

    pub fn shift_pi(&self, by: i32) -> Self {
        Self(self.0.iter().map(|x| x.shift_pi(by)).collect())
    }

    /// Exact value at an integer dimension.
    pub fn eval(&self, n: i64) -> PiLaurent {
        let nn = Q::from_integer(BigInt::from(n));
        let mut acc = PiLaurent::zero();
        for c in self.0.iter().rev() {
            acc = &acc.scale(&nn) + c;
        }
        acc
    }

    /// Rewrites the polynomial in powers of u = (n-1)(n-3), if it is one.
    pub fn in_u_basis(&self) -> Option<Vec<PiLaurent>> {
        let mut rest = self.clone();
        let u = Self::u_factor();
        let top = match rest.degree() {
            None => return Some(Vec::new()),
            Some(d) if d % 2 == 1 => return None,
            Some(d) => d / 2,
        };
        let mut out = vec![PiLaurent::zero(); top + 1];
        for j in (0..=top).rev() {
            let c = rest.coeff(2 * j);
            let uj = (0..j).fold(NPoly::constant(PiLaurent::one()), |acc, _| &acc * &u);
            rest = &rest - &uj.scale_pi(&c);
            out[j] = c;
            if rest.degree().is_some_and(|d| d >= 2 * j) {
                return None;
            }
        }
        if !rest.is_zero() {
            return None;
        }
        Some(out)
    }

    /// Coefficients in powers of P = (n-1)(n-3)/24.
    pub fn in_p_basis(&self) -> Option<Vec<PiLaurent>> {
        let u = self.in_u_basis()?;
        let mut w = Q::one();
        Some(
            u.into_iter()
                .map(|c| {
                    let r = c.scale(&w);
                    w *= q(24, 1);
                    r
                })
                .collect(),
        )
    }
}

impl Add for &NPoly {
    type Output = NPoly;
    fn add(self, o: &NPoly) -> NPoly {
        let n = self.0.len().max(o.0.len());
        NPoly::from_coeffs((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl Sub for &NPoly {
    type Output = NPoly;
    fn sub(self, o: &NPoly) -> NPoly {
        let n = self.0.len().max(o.0.len());
        NPoly::from_coeffs((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl Neg for &NPoly {
    type Output = NPoly;
    fn neg(self) -> NPoly {
        NPoly(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &NPoly {
    type Output = NPoly;
    fn mul(self, o: &NPoly) -> NPoly {
        if self.is_zero() || o.is_zero() {
            return NPoly::zero();
        }
        let mut r = vec![PiLaurent::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] = &r[i + j] + &(a * b);
            }
        }
        NPoly::from_coeffs(r)
    }
}

impl fmt::Display for NPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}) n")?,
                _ => write!(f, "({c}) n^{d}")?,
            }
        }
        Ok(())
    }
}
