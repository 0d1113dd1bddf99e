use crate::error::{Error, Result};
use crate::ode::{self, Options};
use std::f64::consts::PI;

const EPS: f64 = 1e-6;

/// Does the radial solution with eigenvalue `lambda` vanish before `r`?
fn crosses_before(n: u32, lambda: f64, r: f64) -> Result<bool> {
    let m = n as f64 - 1.0;
    let y0 = [1.0 - lambda * EPS * EPS / (2.0 * n as f64), -lambda * EPS / n as f64];
    let mut crossed = false;
    let out = ode::solve(
        |x, y: &[f64; 2]| [y[1], -m * y[1] / x.tan() - lambda * y[0]],
        EPS,
        y0,
        &[r],
        &Options::default(),
        |_, y| {
            crossed = y[0] < 0.0;
            !crossed
        },
    )?;
    Ok(crossed || out.last().is_some_and(|y| y[0] < 0.0))
}

/// First Dirichlet eigenvalue of `-y'' - (n-1) cot(x) y' = λ y` on (0, D/2) with y'(0) = 0:
/// the geodesic ball of diameter D in the unit n-sphere.
pub fn ball_first_eigen(n: u32, d: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("ball problem needs n >= 2, got {n}")));
    }
    if !(d > 0.0 && d < PI) {
        return Err(Error::Domain(format!("ball diameter D = {d} must lie in (0, pi)")));
    }
    let r = 0.5 * d;
    let mut lo = 0.0;
    let mut hi = (PI / r).powi(2);
    let mut guard = 0;
    while !crosses_before(n, hi, r)? {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::NonConvergence("no upper bracket for the ball eigenvalue".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-13 * hi {
            return Ok(mid);
        }
        if crosses_before(n, mid, r)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NonConvergence("ball bisection did not settle".into()))
}
