use super::{EigenResult, Method};
use crate::error::{Error, Result};
use crate::grid::{uniform, GridFunction};
use crate::kernels::cs;
use crate::model::ModelParams;
use crate::ode::{self, Options};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub struct ShootOptions {
    pub tol: f64,
    pub eigenfunction_intervals: Option<usize>,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self { tol: 1e-12, eigenfunction_intervals: None }
    }
}

const MAX_BISECTIONS: usize = 200;

fn check_index(index: u8) -> Result<()> {
    if index == 1 || index == 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("eigenvalue index {index} not in {{1, 2}}")))
    }
}

/// θ(D/2) for θ' = cos²θ + (λ - V) sin²θ, θ(-D/2) = 0.
fn end_theta(p: &ModelParams, lambda: f64, tol: f64) -> Result<f64> {
    let v = p.potential();
    let o = Options { atol: tol, rtol: tol, ..Options::default() };
    let y = ode::solve_to(
        |s, y: &[f64; 1]| {
            let (sn, c) = y[0].sin_cos();
            [c * c + (lambda - v.eval(s)) * sn * sn]
        },
        -p.half(),
        [0.0],
        p.half(),
        &o,
    )?;
    Ok(y[0])
}

/// θ(D/2) for the non-normal form written as (w φ')' + λ w φ = 0 with w = cs^{n-1}:
/// θ' = cos²θ / w + λ w sin²θ.
fn end_theta_nonnormal(p: &ModelParams, lambda: f64, tol: f64) -> Result<f64> {
    let e = p.nm1();
    let k = p.k;
    let o = Options { atol: tol, rtol: tol, ..Options::default() };
    let y = ode::solve_to(
        |s, y: &[f64; 1]| {
            let w = if e == 0.0 { 1.0 } else { cs(s, k).powf(e) };
            let (sn, c) = y[0].sin_cos();
            [c * c / w + lambda * w * sn * sn]
        },
        -p.half(),
        [0.0],
        p.half(),
        &o,
    )?;
    Ok(y[0])
}

fn bisect(target: f64, lo0: f64, mut theta: impl FnMut(f64) -> Result<f64>, scale: f64) -> Result<f64> {
    let mut lo = lo0;
    let mut step = scale.max(1.0);
    let mut hi = lo + step;
    while theta(hi)? <= target {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        if !hi.is_finite() {
            return Err(Error::NonConvergence("no upper bracket for the eigenvalue".into()));
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * mid.abs() {
            return Ok(mid);
        }
        if theta(mid)? > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NonConvergence(format!("bisection did not settle in [{lo}, {hi}]")))
}

fn solve_normal(p: &ModelParams, index: u8, tol: f64) -> Result<f64> {
    let v = p.potential();
    let lo = v.min_on(p.half());
    let target = index as f64 * PI;
    bisect(target, lo, |l| end_theta(p, l, tol), 4.0 * p.base())
}

pub fn eigen_shoot(params: &ModelParams, index: u8) -> Result<EigenResult> {
    eigen_shoot_with(params, index, ShootOptions::default())
}

pub fn eigen_shoot_with(params: &ModelParams, index: u8, opts: ShootOptions) -> Result<EigenResult> {
    let p = params.validate()?;
    check_index(index)?;
    let lambda = solve_normal(&p, index, opts.tol)?;
    let coarse = solve_normal(&p, index, 100.0 * opts.tol)?;
    let eigenfunction = match opts.eigenfunction_intervals {
        Some(m) => Some(eigenfunction(&p, lambda, m)?),
        None => None,
    };
    Ok(EigenResult {
        eigenvalue: lambda,
        index,
        method: Method::Shooting,
        error_estimate: (lambda - coarse).abs(),
        unextrapolated: None,
        eigenfunction,
    })
}

/// Dirichlet eigenvalues of φ'' - (n-1) tn_K φ' + λ φ = 0 directly, without the gauge change.
pub fn eigen_shoot_nonnormal(params: &ModelParams, index: u8) -> Result<f64> {
    let p = params.validate()?;
    check_index(index)?;
    let target = index as f64 * PI;
    let lo = (p.potential().min_on(p.half())).min(0.0);
    bisect(target, lo, |l| end_theta_nonnormal(&p, l, 1e-12), 4.0 * p.base())
}

/// Samples of the eigenfunction normalized to unit sup-norm and positive near -D/2.
fn eigenfunction(p: &ModelParams, lambda: f64, intervals: usize) -> Result<GridFunction> {
    let v = p.potential();
    let nodes = uniform(-p.half(), p.half(), intervals);
    let ys = ode::solve(
        |s, y: &[f64; 2]| [y[1], (v.eval(s) - lambda) * y[0]],
        -p.half(),
        [0.0, 1.0],
        &nodes,
        &Options::default(),
        |_, _| true,
    )?;
    let mut f: Vec<f64> = ys.iter().map(|y| y[0]).collect();
    let m = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    f.iter_mut().for_each(|v| *v /= m);
    Ok(GridFunction::new(nodes, f))
}

/// Largest |ϕ(s) ∓ ϕ(-s)| of an eigenfunction on a symmetric grid, with the sign set by `index`.
pub fn symmetry_residual(f: &GridFunction, index: u8) -> f64 {
    let n = f.len();
    let sign = if index == 1 { 1.0 } else { -1.0 };
    (0..n).fold(0.0, |m, i| m.max((f.y[i] - sign * f.y[n - 1 - i]).abs()))
}
