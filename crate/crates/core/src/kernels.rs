//! Generalized sine, cosine and tangent for constant curvature `K`.
//!
//! All three switch to a Taylor expansion in `w = K s²` when `|w| < SERIES_THRESHOLD`
//! so that the `K -> 0` limit is continuous.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

pub const SERIES_THRESHOLD: f64 = 1e-4;

/// sin(√K s)/√K, s, or sinh(√-K s)/√-K.
pub fn sn(s: f64, k: f64) -> f64 {
    let w = k * s * s;
    if w.abs() < SERIES_THRESHOLD {
        return s * (1.0 - w / 6.0 * (1.0 - w / 20.0 * (1.0 - w / 42.0 * (1.0 - w / 72.0))));
    }
    if k > 0.0 {
        let r = k.sqrt();
        (r * s).sin() / r
    } else {
        let r = (-k).sqrt();
        (r * s).sinh() / r
    }
}

/// cos(√K s), 1, or cosh(√-K s).
pub fn cs(s: f64, k: f64) -> f64 {
    let w = k * s * s;
    if w.abs() < SERIES_THRESHOLD {
        return 1.0 - w / 2.0 * (1.0 - w / 12.0 * (1.0 - w / 30.0 * (1.0 - w / 56.0)));
    }
    if k > 0.0 {
        (k.sqrt() * s).cos()
    } else {
        ((-k).sqrt() * s).cosh()
    }
}

/// √K tan(√K s), 0, or -√-K tanh(√-K s). Errors at and beyond the pole for K > 0.
pub fn tn(s: f64, k: f64) -> Result<f64> {
    if k > 0.0 && s.abs() * k.sqrt() >= FRAC_PI_2 {
        return Err(Error::Pole(format!("tn({s}, {k}) at or past pi/(2 sqrt K)")));
    }
    Ok(tn_unchecked(s, k))
}

/// `tn` without the pole check, for callers that already validated the domain.
pub fn tn_unchecked(s: f64, k: f64) -> f64 {
    let w = k * s * s;
    if w.abs() < SERIES_THRESHOLD {
        return k * s * (1.0 + w * (1.0 / 3.0 + w * (2.0 / 15.0 + w * (17.0 / 315.0 + w * 62.0 / 2835.0))));
    }
    if k > 0.0 {
        let r = k.sqrt();
        r * (r * s).tan()
    } else {
        let r = (-k).sqrt();
        -r * (r * s).tanh()
    }
}

/// 1/cs², the sec² of the model potential.
pub fn sec2(s: f64, k: f64) -> f64 {
    let c = cs(s, k);
    1.0 / (c * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn known_values() {
        assert_eq!(sn(1.5, 0.0), 1.5);
        assert!((sn(FRAC_PI_2, 1.0) - 1.0).abs() < 1e-15);
        assert!((sn(1.0, -1.0) - 1.1752011936438014).abs() < 1e-14);
        assert_eq!(cs(0.0, 7.3), 1.0);
        assert!((cs(PI, 1.0) + 1.0).abs() < 1e-15);
        assert!((cs(1.0, -4.0) - 3.7621956910836314).abs() < 1e-13);
        assert_eq!(tn(2.0, 0.0).unwrap(), 0.0);
        assert!((tn(PI / 4.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((tn(1.0, -1.0).unwrap() + 0.7615941559557649).abs() < 1e-14);
    }

    #[test]
    fn pole() {
        assert!(matches!(tn(FRAC_PI_2, 1.0), Err(Error::Pole(_))));
        assert!(matches!(tn(-2.0, 1.0), Err(Error::Pole(_))));
        assert!(tn(1.5, 1.0).is_ok());
    }

    #[test]
    fn crossover_continuity() {
        // just on either side of the series threshold
        for &s in &[0.3, 1.0, 2.5] {
            let kc = SERIES_THRESHOLD / (s * s);
            for &k in &[kc, -kc] {
                let lo = k * (1.0 - 1e-9);
                let hi = k * (1.0 + 1e-9);
                assert!(((sn(s, lo) - sn(s, hi)) / sn(s, hi)).abs() < 1e-12);
                assert!(((cs(s, lo) - cs(s, hi)) / cs(s, hi)).abs() < 1e-12);
                let (a, b) = (tn_unchecked(s, lo), tn_unchecked(s, hi));
                assert!(((a - b) / b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn branch_continuity_at_zero() {
        // the jump across K = 0 is the analytic 2 e s³/6, below 1e-10 only for s ≲ 0.67
        let e = 1e-9;
        for i in 0..=30 {
            let s = i as f64 * 0.1;
            let jump = sn(s, e) - sn(s, -e);
            assert!((jump + e * s * s * s / 3.0).abs() <= 1e-15);
            if s <= 0.6 {
                assert!(jump.abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn tn_small_k_is_linear() {
        let s = 0.7;
        for &k in &[1e-6, 1e-8, 1e-10] {
            assert!((tn_unchecked(s, k) - k * s).abs() <= k * k * s * s * s);
        }
    }

    proptest! {
        #[test]
        fn derivative_of_sn_is_cs(s in -2.0f64..2.0, k in -2.0f64..0.5) {
            let h = 1e-6;
            let d = (sn(s + h, k) - sn(s - h, k)) / (2.0 * h);
            prop_assert!((d - cs(s, k)).abs() <= 1e-8 * cs(s, k).abs().max(1.0));
        }

        #[test]
        fn pythagorean(s in -3.0f64..3.0, k in -1.5f64..1.5) {
            prop_assume!(k != 0.0);
            let v = k * sn(s, k).powi(2) + cs(s, k).powi(2);
            let scale = (k * sn(s, k).powi(2)).abs().max(1.0);
            prop_assert!((v - 1.0).abs() <= 1e-12 * scale);
        }

        #[test]
        fn tn_is_minus_log_derivative(s in -1.2f64..1.2, k in -2.0f64..0.9) {
            let h = 1e-6;
            let d = -((cs(s + h, k)).ln() - (cs(s - h, k)).ln()) / (2.0 * h);
            let t = tn(s, k).unwrap();
            prop_assert!((d - t).abs() <= 1e-7 * t.abs().max(1.0));
        }
    }
}
