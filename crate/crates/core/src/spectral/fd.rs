use super::{EigenResult, Method};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// diagonal `d` and constant off-diagonal `e`, via the LDLᵀ pivots of T - xI.
pub fn sturm_count(d: &[f64], e: f64, x: f64) -> usize {
    let e2 = e * e;
    let mut count = 0;
    let mut q = 1.0;
    for (i, &di) in d.iter().enumerate() {
        q = di - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (di.abs() + e.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `index`-th smallest eigenvalue of the central-difference operator with
/// `intervals` cells on [-D/2, D/2].
pub fn fd_eigenvalue(params: &ModelParams, index: u8, intervals: usize) -> Result<f64> {
    let p = params.validate()?;
    let h = p.d / intervals as f64;
    let v = p.potential();
    let ih2 = 1.0 / (h * h);
    // work relative to V(0) so that a constant potential is an exact shift
    let v0 = v.at_center();
    let d: Vec<f64> = (1..intervals)
        .map(|i| 2.0 * ih2 + (v.eval(-p.half() + h * i as f64) - v0))
        .collect();
    let e = -ih2;
    let lo0 = d.iter().fold(f64::INFINITY, |m, &x| m.min(x)) - 2.0 * ih2;
    let hi0 = d.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x)) + 2.0 * ih2;
    let (mut lo, mut hi) = (lo0, hi0);
    let want = index as usize;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid + v0);
        }
        if sturm_count(&d, e, mid) >= want {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi) + v0)
}

/// Finite-difference eigenvalue with Richardson extrapolation over `grid_size` and `2 grid_size`.
pub fn eigen_fd(params: &ModelParams, index: u8, grid_size: usize) -> Result<EigenResult> {
    if grid_size < 64 || !grid_size.is_power_of_two() {
        return Err(Error::Domain(format!("grid size {grid_size} must be a power of two >= 64")));
    }
    if index != 1 && index != 2 {
        return Err(Error::Domain(format!("eigenvalue index {index} not in {{1, 2}}")));
    }
    let coarse = fd_eigenvalue(params, index, grid_size)?;
    let fine = fd_eigenvalue(params, index, 2 * grid_size)?;
    Ok(EigenResult {
        eigenvalue: (4.0 * fine - coarse) / 3.0,
        index,
        method: Method::FiniteDifference,
        error_estimate: (fine - coarse).abs() / 3.0,
        unextrapolated: Some(fine),
        eigenfunction: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn discrete_laplacian() {
        let p = ModelParams::new(4, 0.0, PI).unwrap();
        let raw = fd_eigenvalue(&p, 1, 1024).unwrap();
        assert!((raw - 1.0).abs() < 1e-5);
        let h = PI / 1024.0;
        let exact = 4.0 / (h * h) * (0.5 * h).sin().powi(2);
        assert!((raw - exact).abs() < 1e-11);
        let r = eigen_fd(&p, 1, 1024).unwrap();
        assert!((r.eigenvalue - 1.0).abs() < 1e-8);
    }

    #[test]
    fn constant_shift_is_exact() {
        let a = fd_eigenvalue(&ModelParams::new(3, 0.9, 2.0).unwrap(), 2, 256).unwrap();
        let b = fd_eigenvalue(&ModelParams::new(3, 0.0, 2.0).unwrap(), 2, 256).unwrap();
        assert!((a - b + 0.9).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_grid() {
        let p = ModelParams::new(2, 0.0, 1.0).unwrap();
        assert!(eigen_fd(&p, 1, 100).is_err());
        assert!(eigen_fd(&p, 1, 32).is_err());
    }
}
