//! Laurent polynomials in π with exact rational coefficients.

use crate::dd::Dd;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Σ c_e π^e with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PiLaurent(BTreeMap<i32, Q>);

impl PiLaurent {
    pub fn zero() -> Self {
        Self(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::rational(Q::one())
    }

    pub fn rational(c: Q) -> Self {
        Self::monomial(c, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::rational(q(n, 1))
    }

    /// c π^e.
    pub fn monomial(c: Q, e: i32) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        Self(m)
    }

    pub fn pi_pow(e: i32) -> Self {
        Self::monomial(Q::one(), e)
    }

    pub fn from_terms(terms: &[(i32, Q)]) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &Q)> {
        self.0.iter()
    }

    pub fn coeff(&self, e: i32) -> Q {
        self.0.get(&e).cloned().unwrap_or_else(Q::zero)
    }

    fn add_term(&mut self, e: i32, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self(self.0.iter().map(|(e, v)| (*e, v * c)).collect())
    }

    pub fn shift_pi(&self, by: i32) -> Self {
        Self(self.0.iter().map(|(e, v)| (e + by, v.clone())).collect())
    }

    pub fn to_dd(&self) -> Dd {
        let mut acc = Dd::ZERO;
        for (e, c) in &self.0 {
            let p = if *e >= 0 { Dd::PI.powi(*e as u32) } else { Dd::ONE / Dd::PI.powi((-*e) as u32) };
            acc = acc + Dd::from_rational(c) * p;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.to_dd().to_f64()
    }

    /// Exact sign, from rational enclosures of π that are tightened until decisive.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        for digits in [40usize, 80, 160, 320] {
            let (lo, hi) = pi_bounds(digits);
            let (a, b) = self.enclose(&lo, &hi);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
        }
        // a nonzero Laurent polynomial with rational coefficients cannot vanish at π
        unreachable!("sign of a nonzero PiLaurent could not be separated from zero")
    }

    fn enclose(&self, lo: &Q, hi: &Q) -> (Q, Q) {
        let mut a = Q::zero();
        let mut b = Q::zero();
        for (e, c) in &self.0 {
            let (p_lo, p_hi) = if *e >= 0 {
                (pow(lo, *e as u32), pow(hi, *e as u32))
            } else {
                (pow(hi, (-*e) as u32).recip(), pow(lo, (-*e) as u32).recip())
            };
            if c.is_positive() {
                a += c * &p_lo;
                b += c * &p_hi;
            } else {
                a += c * &p_hi;
                b += c * &p_lo;
            }
        }
        (a, b)
    }
}

fn pow(x: &Q, n: u32) -> Q {
    let mut r = Q::one();
    for _ in 0..n {
        r *= x;
    }
    r
}

const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664709384460955058223172535940812848111745028410270193852110555964462294895493038196442881097566593344612847564823378678316527120190914564856692346034861045432664821339360726024914127372458700660631558817488152092096282925409171536436789259036001133053054882046652138414695194151160943305727036575959195309218611738193261179310511854807446237996274956735188575272489122793818301194912";

/// Rational bounds lo < π < hi from a truncated decimal expansion.
fn pi_bounds(digits: usize) -> (Q, Q) {
    let digits = digits.min(PI_DIGITS.len() - 3);
    let frac = &PI_DIGITS[2..2 + digits];
    let num: BigInt = format!("3{frac}").parse().unwrap();
    let den = num_traits::pow(BigInt::from(10), digits);
    let lo = Q::new(num.clone(), den.clone());
    let hi = Q::new(num + 1, den);
    (lo, hi)
}

/// π as a rational accurate to `digits` decimals, for lossless float rendering.
pub fn pi_rational(digits: usize) -> Q {
    pi_bounds(digits).0
}

impl Add for &PiLaurent {
    type Output = PiLaurent;
    fn add(self, o: &PiLaurent) -> PiLaurent {
        let mut r = self.clone();
        for (e, c) in &o.0 {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl Sub for &PiLaurent {
    type Output = PiLaurent;
    fn sub(self, o: &PiLaurent) -> PiLaurent {
        let mut r = self.clone();
        for (e, c) in &o.0 {
            r.add_term(*e, -c.clone());
        }
        r
    }
}

impl Neg for &PiLaurent {
    type Output = PiLaurent;
    fn neg(self) -> PiLaurent {
        PiLaurent(self.0.iter().map(|(e, c)| (*e, -c.clone())).collect())
    }
}

impl Mul for &PiLaurent {
    type Output = PiLaurent;
    fn mul(self, o: &PiLaurent) -> PiLaurent {
        let mut r = PiLaurent::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }
}

impl fmt::Display for PiLaurent {
    /// Highest power of π first, e.g. `1/2 π^2 - 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.0.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match *e {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a} ")?;
                    }
                    if *e == 1 {
                        write!(f, "π")?
                    } else {
                        write!(f, "π^{e}")?
                    }
                }
            }
        }
        Ok(())
    }
}
