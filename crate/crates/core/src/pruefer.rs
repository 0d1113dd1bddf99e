//! Prüfer angle formulation of the stationary Riccati equation
//! `ψ' + ψ² + π²/D² + c / cs_K(z)² = 0` on `[0, D/2]`, the Robin constant `c_k`
//! and the supersolution built from the left and right Riccati branches.
//!
//! With `φ = r cos q`, `φ' = r sin q` and `μ(z) = π²/D² + c / cs_K(z)²`:
//! `q' = -μ cos²q - sin²q`, `(ln r)' = (1 - μ) sin q cos q`, and `ψ = tan q`.

use crate::error::{Error, Result};
use crate::grid::{uniform, GridFunction};
use crate::kernels::sec2;
use crate::model::ModelParams;
use crate::ode::{self, Options};
use crate::roots::illinois;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

pub const DEFAULT_INTERVALS: usize = 512;
/// ψ is reported only where |q| < π/2 - RECONSTRUCT_EPS.
pub const RECONSTRUCT_EPS: f64 = 1e-7;

fn mu(z: f64, c: f64, p: &ModelParams) -> f64 {
    let b = p.base();
    if c == 0.0 {
        b
    } else {
        b + c * sec2(z, p.k)
    }
}

fn rhs(z: f64, y: &[f64; 2], c: f64, p: &ModelParams) -> [f64; 2] {
    let m = mu(z, c, p);
    let (s, co) = y[0].sin_cos();
    [-m * co * co - s * s, (1.0 - m) * s * co]
}

fn opts() -> Options {
    Options::default()
}

fn require_nonneg_k(p: &ModelParams) -> Result<()> {
    if p.k < 0.0 {
        return Err(Error::Hypothesis("Riccati constructions are set up for K >= 0".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct PruferTrajectory {
    pub z: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub q0: f64,
    pub c: f64,
    pub params: ModelParams,
}

impl PruferTrajectory {
    pub fn end_angle(&self) -> f64 {
        *self.q.last().unwrap()
    }
}

/// Integrates the Prüfer system forward from `z = 0` with `q(0) = q0`, `r(0) = 1`
/// on a uniform grid of [0, D/2].
pub fn integrate_q(q0: f64, c: f64, params: &ModelParams) -> Result<PruferTrajectory> {
    integrate_q_on(q0, c, params, &uniform(0.0, params.half(), DEFAULT_INTERVALS))
}

/// As [`integrate_q`] on caller-supplied increasing nodes starting at 0.
pub fn integrate_q_on(q0: f64, c: f64, params: &ModelParams, nodes: &[f64]) -> Result<PruferTrajectory> {
    let p = params.validate()?;
    let ys = ode::solve(|z, y| rhs(z, y, c, &p), 0.0, [q0, 0.0], nodes, &opts(), |_, _| true)?;
    Ok(PruferTrajectory {
        z: nodes.to_vec(),
        q: ys.iter().map(|y| y[0]).collect(),
        r: ys.iter().map(|y| y[1].exp()).collect(),
        q0,
        c,
        params: p,
    })
}

/// q(D/2, 0, c).
pub fn end_angle(c: f64, params: &ModelParams) -> Result<f64> {
    let y = ode::solve_to(|z, y| rhs(z, y, c, params), 0.0, [0.0, 0.0], params.half(), &opts())?;
    Ok(y[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Serialize)]
pub struct RiccatiSolution {
    pub side: Side,
    pub c: f64,
    /// Right-boundary slope, right branch only.
    pub k: Option<f64>,
    /// Samples of ψ on the part of the grid where the solution is finite.
    pub psi: GridFunction,
    /// Interval on which the solution exists as a finite function.
    pub existence: (f64, f64),
    /// Where the Prüfer angle reaches ∓π/2, if it does inside [0, D/2].
    pub blowup: Option<f64>,
}

impl RiccatiSolution {
    /// Value at grid node `i` of the full grid, `None` if outside the existence interval.
    fn lookup(&self, z: f64) -> Option<f64> {
        let i = self.psi.x.iter().position(|&x| x == z)?;
        Some(self.psi.y[i])
    }
}

fn locate_crossing(c: f64, p: &ModelParams, z_from: f64, y_from: [f64; 2], z_to: f64, level: f64) -> f64 {
    let f = |z: f64| -> Result<f64> {
        let y = ode::solve_to(|t, y| rhs(t, y, c, p), z_from, y_from, z, &opts())?;
        Ok(y[0] - level)
    };
    illinois(f, z_from, z_to, 1e-13, 1e-14, 200).unwrap_or(z_to)
}

/// Left branch ψ^L_c with ψ(0) = 0, possibly ending in a blowup before D/2.
pub fn left_branch_on(c: f64, params: &ModelParams, nodes: &[f64]) -> Result<RiccatiSolution> {
    let p = params.validate()?;
    require_nonneg_k(&p)?;
    let ys = ode::solve(|z, y| rhs(z, y, c, &p), 0.0, [0.0, 0.0], nodes, &opts(), |_, _| true)?;
    let mut xs = Vec::new();
    let mut ps = Vec::new();
    let mut blowup = None;
    for (i, (&z, y)) in nodes.iter().zip(&ys).enumerate() {
        if y[0] <= -FRAC_PI_2 {
            blowup = Some(locate_crossing(c, &p, nodes[i - 1], ys[i - 1], z, -FRAC_PI_2));
            break;
        }
        if y[0] > -FRAC_PI_2 + RECONSTRUCT_EPS {
            xs.push(z);
            ps.push(y[0].tan());
        }
    }
    let hi = blowup.unwrap_or(p.half());
    Ok(RiccatiSolution {
        side: Side::Left,
        c,
        k: None,
        psi: GridFunction::new(xs, ps),
        existence: (0.0, hi),
        blowup,
    })
}

/// Right branch ψ^R_{k,c} with ψ(D/2) = -k, integrated backward.
pub fn right_branch_on(k: f64, c: f64, params: &ModelParams, nodes: &[f64]) -> Result<RiccatiSolution> {
    let p = params.validate()?;
    require_nonneg_k(&p)?;
    if !(k > 0.0) {
        return Err(Error::Domain(format!("Robin slope k = {k} must be positive")));
    }
    let back: Vec<f64> = nodes.iter().rev().copied().collect();
    let q_end = -k.atan();
    let ys = ode::solve(|z, y| rhs(z, y, c, &p), p.half(), [q_end, 0.0], &back, &opts(), |_, _| true)?;
    let mut xs = Vec::new();
    let mut ps = Vec::new();
    let mut blowup = None;
    for (i, (&z, y)) in back.iter().zip(&ys).enumerate() {
        if y[0] >= FRAC_PI_2 {
            blowup = Some(locate_crossing(c, &p, back[i - 1], ys[i - 1], z, FRAC_PI_2));
            break;
        }
        if y[0] < FRAC_PI_2 - RECONSTRUCT_EPS {
            xs.push(z);
            ps.push(y[0].tan());
        }
    }
    xs.reverse();
    ps.reverse();
    if let Some(last) = ps.last_mut() {
        if *xs.last().unwrap() == p.half() {
            *last = -k;
        }
    }
    let lo = blowup.unwrap_or(0.0);
    Ok(RiccatiSolution {
        side: Side::Right,
        c,
        k: Some(k),
        psi: GridFunction::new(xs, ps),
        existence: (lo, p.half()),
        blowup,
    })
}

/// ψ^L_c on the default grid; errors if it blows up inside [0, D/2].
pub fn psi_left(c: f64, params: &ModelParams) -> Result<RiccatiSolution> {
    let s = left_branch_on(c, params, &uniform(0.0, params.half(), DEFAULT_INTERVALS))?;
    match s.blowup {
        Some(z) => Err(Error::Blowup { z }),
        None => Ok(s),
    }
}

/// ψ^R_{k,c} on the default grid; errors if it blows up inside [0, D/2].
pub fn psi_right(k: f64, c: f64, params: &ModelParams) -> Result<RiccatiSolution> {
    let s = right_branch_on(k, c, params, &uniform(0.0, params.half(), DEFAULT_INTERVALS))?;
    match s.blowup {
        Some(z) => Err(Error::Blowup { z }),
        None => Ok(s),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BracketOptions {
    /// Initial lower end of the bracket as a multiple of π²/D² (negative).
    pub lower_factor: f64,
    pub max_doublings: u32,
}

impl Default for BracketOptions {
    fn default() -> Self {
        Self { lower_factor: -4.0, max_doublings: 60 }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CkResult {
    pub c_k: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub doublings: u32,
}

/// The unique c with q(D/2, 0, c) = -π/2 + atan(1/k).
pub fn find_ck(k: f64, params: &ModelParams) -> Result<f64> {
    Ok(find_ck_with(k, params, BracketOptions::default())?.c_k)
}

pub fn find_ck_with(k: f64, params: &ModelParams, bo: BracketOptions) -> Result<CkResult> {
    let p = params.validate()?;
    require_nonneg_k(&p)?;
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("Robin slope k = {k} must be positive and finite")));
    }
    let target = -FRAC_PI_2 + (1.0 / k).atan();
    let g = |c: f64| -> Result<f64> { Ok(end_angle(c, &p)? - target) };
    // q is strictly decreasing in c and q(D/2, 0, 0) = -π/2 < target
    let hi = 0.0;
    let mut lo = bo.lower_factor * p.base();
    let mut doublings = 0;
    while g(lo)? <= 0.0 {
        if doublings >= bo.max_doublings {
            return Err(Error::Bracket(format!(
                "q(D/2, 0, c) stays below the target for c down to {lo:e} after {doublings} doublings (k = {k})"
            )));
        }
        lo *= 2.0;
        doublings += 1;
    }
    let c_k = illinois(g, lo, hi, 1e-14, 1e-15 * p.base(), 400)?;
    let residual = g(c_k)?.abs();
    Ok(CkResult { c_k, residual, bracket: (lo, hi), doublings })
}

/// The normalized Robin eigenfunction φ_{0,1/k} and its derivative.
#[derive(Debug, Clone, Serialize)]
pub struct RobinFunction {
    pub k: f64,
    pub c_k: f64,
    pub phi: GridFunction,
    pub dphi: GridFunction,
    /// (log φ)' = tan q(·, 0, c_k).
    pub psi: GridFunction,
    /// φ rebuilt from the Prüfer radius, for cross-checking.
    pub phi_from_radius: GridFunction,
}

impl RobinFunction {
    /// max of |φ(D/2) - 1/k|, |φ'(D/2) + 1|, |φ'(0)|.
    pub fn boundary_defect(&self) -> f64 {
        let n = self.phi.len() - 1;
        (self.phi.y[n] - 1.0 / self.k)
            .abs()
            .max((self.dphi.y[n] + 1.0).abs())
            .max(self.dphi.y[0].abs())
    }
}

/// Everything tied to one Robin slope k: c_k and the constructions built on it.
#[derive(Debug, Clone, Copy)]
pub struct RobinProblem {
    pub k: f64,
    pub c_k: f64,
    pub params: ModelParams,
}

impl RobinProblem {
    pub fn new(k: f64, params: &ModelParams) -> Result<Self> {
        let c_k = find_ck(k, params)?;
        Ok(Self { k, c_k, params: *params })
    }

    pub fn eigenfunction_on(&self, nodes: &[f64]) -> Result<RobinFunction> {
        let p = self.params;
        let c = self.c_k;
        // state: q, ln r, L with L' = tan q
        let f = |z: f64, y: &[f64; 3]| -> [f64; 3] {
            let [dq, dl] = rhs(z, &[y[0], y[1]], c, &p);
            [dq, dl, y[0].tan()]
        };
        let ys = ode::solve(f, 0.0, [0.0, 0.0, 0.0], nodes, &opts(), |_, _| true)?;
        let last = ys.last().unwrap();
        if (nodes.last().copied().unwrap() - p.half()).abs() > 0.0 {
            return Err(Error::Domain("Robin grid must end at D/2".into()));
        }
        let inv_k = 1.0 / self.k;
        let r_scale = inv_k / (last[1].exp() * last[0].cos());
        let mut phi = Vec::with_capacity(ys.len());
        let mut dphi = Vec::with_capacity(ys.len());
        let mut psi = Vec::with_capacity(ys.len());
        let mut phr = Vec::with_capacity(ys.len());
        for y in &ys {
            let v = inv_k * (y[2] - last[2]).exp();
            let t = y[0].tan();
            phi.push(v);
            dphi.push(v * t);
            psi.push(t);
            phr.push(y[1].exp() * y[0].cos() * r_scale);
        }
        let x = nodes.to_vec();
        Ok(RobinFunction {
            k: self.k,
            c_k: self.c_k,
            phi: GridFunction::new(x.clone(), phi),
            dphi: GridFunction::new(x.clone(), dphi),
            psi: GridFunction::new(x.clone(), psi),
            phi_from_radius: GridFunction::new(x, phr),
        })
    }

    /// (log φ_{0,1/k})' on `nodes`.
    pub fn stationary_on(&self, nodes: &[f64]) -> Result<GridFunction> {
        Ok(self.eigenfunction_on(nodes)?.psi)
    }

    /// ψ⁺_{k,s} = min(ψ^L_{c_k - s}, ψ^R_{k, c_k + s}); a branch that has blown up counts as +∞.
    pub fn supersolution_on(&self, s: f64, nodes: &[f64]) -> Result<GridFunction> {
        if !(s >= 0.0) {
            return Err(Error::Domain(format!("supersolution shift s = {s} must be nonnegative")));
        }
        let l = left_branch_on(self.c_k - s, &self.params, nodes)?;
        let r = right_branch_on(self.k, self.c_k + s, &self.params, nodes)?;
        let mut y = Vec::with_capacity(nodes.len());
        for &z in nodes {
            let v = match (l.lookup(z), r.lookup(z)) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => {
                    return Err(Error::Coverage(format!("neither branch exists at z = {z} (s = {s})")));
                }
            };
            y.push(v);
        }
        let n = y.len() - 1;
        y[0] = y[0].min(0.0);
        if nodes[n] == self.params.half() {
            y[n] = -self.k;
        }
        Ok(GridFunction::new(nodes.to_vec(), y))
    }

    /// Smallest s for which both comparison functions are real: max(c_k + π²/D², -c_k - π²/D²).
    pub fn lower_bound_threshold(&self) -> f64 {
        let a = self.c_k + self.params.base();
        a.max(-a)
    }

    /// λ̃₊ tanh(λ̃₊ z), the comparison function below ψ^L_{c_k - s}.
    pub fn left_lower_bound(&self, s: f64, z: f64) -> Option<f64> {
        let l2 = s - self.c_k - self.params.base();
        if l2 <= 0.0 {
            return None;
        }
        let l = l2.sqrt();
        Some(l * (l * z).tanh())
    }

    /// (λ̃₋ tan(λ̃₋(D/2 - z)) - k) / (1 + (k/λ̃₋) tan(λ̃₋(D/2 - z))), the comparison function
    /// below ψ^R_{k, c_k + s}, on the interval where its denominator stays positive.
    pub fn right_lower_bound(&self, s: f64, z: f64) -> Option<f64> {
        let l2 = s + self.c_k + self.params.base();
        if l2 <= 0.0 {
            return None;
        }
        let l = l2.sqrt();
        let u = l * (self.params.half() - z);
        if u >= FRAC_PI_2 + (self.k / l).atan() {
            return None;
        }
        let (sn, cn) = u.sin_cos();
        Some((l * sn - self.k * cn) / (cn + self.k / l * sn))
    }
}

pub fn robin_eigenfunction(k: f64, params: &ModelParams) -> Result<RobinFunction> {
    RobinProblem::new(k, params)?.eigenfunction_on(&uniform(0.0, params.half(), DEFAULT_INTERVALS))
}

pub fn supersolution(k: f64, s: f64, params: &ModelParams) -> Result<GridFunction> {
    RobinProblem::new(k, params)?.supersolution_on(s, &uniform(0.0, params.half(), DEFAULT_INTERVALS))
}
