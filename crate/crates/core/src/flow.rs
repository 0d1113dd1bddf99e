//! Evolution of the modulus of concavity
//! `ψ_t = ψ'' + 2ψψ' - 2tn_K(z)(ψ' + ψ² + λ)` on `[0, D/2]` with `ψ(0) = 0`, `ψ(D/2) = -k`.
//!
//! Writing `R = ψ' + ψ² + λ`, the right-hand side is `R' - 2tn R = cs⁻²(cs² R)'`, so every
//! Riccati solution `R = -c/cs²` is stationary. Time stepping is linearly implicit Euler on
//! a grid clustered toward `D/2`. In balanced mode the discrete operator applied to the
//! Robin solution is subtracted, which keeps that solution an exact discrete equilibrium.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::kernels::{cs, tn_unchecked};
use crate::model::ModelParams;
use crate::pruefer::{right_branch_on, RobinProblem};
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FlowOptions {
    pub cells: usize,
    /// Geometric growth of the cells leaving `D/2`.
    pub ratio: f64,
    /// Share of the cells in the geometric layer.
    pub layer_fraction: f64,
    /// Stop at `t_max_factor · D²`.
    pub t_max_factor: f64,
    /// First step is `dt0_factor · h_min²`.
    pub dt0_factor: f64,
    pub growth: f64,
    /// Largest step is `dt_max_factor · D²`.
    pub dt_max_factor: f64,
    pub balanced: bool,
    /// Number of log-spaced (z, ψ) snapshots to keep.
    pub snapshots: usize,
    pub max_steps: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            cells: 512,
            ratio: 1.05,
            layer_fraction: 0.25,
            t_max_factor: 50.0,
            dt0_factor: 0.25,
            growth: 1.1,
            dt_max_factor: 2e-3,
            balanced: true,
            snapshots: 0,
            max_steps: 2_000_000,
        }
    }
}

/// `cells` intervals on `[0, half]`: uniform, then a geometric layer shrinking toward `half`.
pub fn clustered_grid(half: f64, cells: usize, ratio: f64, layer_fraction: f64) -> Vec<f64> {
    let m = ((cells as f64 * layer_fraction).round() as usize).min(cells);
    let u = cells - m;
    // widths measured from half: h0 r^0, ..., h0 r^(m-1), then u cells of h0 r^m
    let top = ratio.powi(m as i32);
    let layer: f64 = (0..m).map(|j| ratio.powi(j as i32)).sum();
    let h0 = half / (layer + u as f64 * top);
    let mut widths: Vec<f64> = (0..m).map(|j| h0 * ratio.powi(j as i32)).collect();
    widths.extend(std::iter::repeat_n(h0 * top, u));
    widths.reverse();
    let mut x = Vec::with_capacity(cells + 1);
    let mut acc = 0.0;
    x.push(0.0);
    for w in &widths[..cells - 1] {
        acc += w;
        x.push(acc);
    }
    x.push(half);
    x
}

/// Inserts the midpoint of every cell.
pub fn refine(x: &[f64]) -> Vec<f64> {
    let mut r = Vec::with_capacity(2 * x.len() - 1);
    for w in x.windows(2) {
        r.push(w[0]);
        r.push(0.5 * (w[0] + w[1]));
    }
    r.push(*x.last().unwrap());
    r
}

/// Three-point weights at interior nodes: first derivative `a`, second derivative `b`.
#[derive(Debug, Clone)]
struct Stencils {
    a: Vec<[f64; 3]>,
    b: Vec<[f64; 3]>,
    tn: Vec<f64>,
}

impl Stencils {
    fn new(x: &[f64], k: f64) -> Self {
        let n = x.len();
        let mut a = vec![[0.0; 3]; n];
        let mut b = vec![[0.0; 3]; n];
        for i in 1..n - 1 {
            let hm = x[i] - x[i - 1];
            let hp = x[i + 1] - x[i];
            let s = hm + hp;
            a[i] = [-hp / (hm * s), (hp - hm) / (hm * hp), hm / (hp * s)];
            b[i] = [2.0 / (hm * s), -2.0 / (hm * hp), 2.0 / (hp * s)];
        }
        let tn = x.iter().map(|&z| tn_unchecked(z, k)).collect();
        Self { a, b, tn }
    }

    fn d1(&self, y: &[f64], i: usize) -> f64 {
        let a = &self.a[i];
        a[0] * y[i - 1] + a[1] * y[i] + a[2] * y[i + 1]
    }

    fn d2(&self, y: &[f64], i: usize) -> f64 {
        let b = &self.b[i];
        b[0] * y[i - 1] + b[1] * y[i] + b[2] * y[i + 1]
    }

    /// Discrete right-hand side at interior nodes (zero at the ends).
    fn apply(&self, y: &[f64], lambda: f64) -> Vec<f64> {
        let n = y.len();
        let mut f = vec![0.0; n];
        for i in 1..n - 1 {
            let d1 = self.d1(y, i);
            f[i] = self.d2(y, i) + 2.0 * y[i] * d1 - 2.0 * self.tn[i] * (d1 + y[i] * y[i] + lambda);
        }
        f
    }
}

#[derive(Debug, Clone)]
pub struct FlowState {
    pub psi: GridFunction,
    pub t: f64,
    pub k: f64,
    pub params: ModelParams,
    /// Constant in the reaction term.
    pub lambda: f64,
    /// Set when the initial data was nonpositive; ψ ≤ 0 is then enforced on every step.
    pub nonpositive: bool,
    stencils: Stencils,
    balance: Option<Vec<f64>>,
}

fn boundary_slack(k: f64) -> f64 {
    1e-12 * (1.0 + k)
}

impl FlowState {
    /// State on the abscissae of `psi`, which run from 0 to the right end where ψ = -k.
    pub fn new(psi: GridFunction, k: f64, params: &ModelParams) -> Result<Self> {
        let p = params.validate()?;
        if !(k > 0.0) {
            return Err(Error::Domain(format!("Robin slope k = {k} must be positive")));
        }
        if psi.len() < 3 || psi.x[0] != 0.0 {
            return Err(Error::Domain("flow grid must start at 0 and have an interior".into()));
        }
        if psi.x.windows(2).any(|w| !(w[1] > w[0])) || *psi.x.last().unwrap() > p.half() {
            return Err(Error::Domain("flow grid must increase inside [0, D/2]".into()));
        }
        let n = psi.len() - 1;
        if psi.y[0].abs() > boundary_slack(k) || (psi.y[n] + k).abs() > boundary_slack(k) {
            return Err(Error::Domain(format!(
                "boundary data ψ(0) = {}, ψ(end) = {} do not match 0 and -{k}",
                psi.y[0], psi.y[n]
            )));
        }
        let mut psi = psi;
        psi.y[0] = 0.0;
        psi.y[n] = -k;
        let nonpositive = psi.y.iter().all(|&v| v <= 0.0);
        let stencils = Stencils::new(&psi.x, p.k);
        Ok(Self { psi, t: 0.0, k, params: p, lambda: p.base(), nonpositive, stencils, balance: None })
    }

    /// Subtracts the discrete operator at `reference`, making it an exact equilibrium.
    pub fn balanced_against(mut self, reference: &GridFunction) -> Self {
        debug_assert_eq!(reference.x, self.psi.x);
        self.balance = Some(self.stencils.apply(&reference.y, self.lambda));
        self
    }

    pub fn is_balanced(&self) -> bool {
        self.balance.is_some()
    }

    /// Discrete right-hand side at the current state.
    pub fn rhs(&self) -> Vec<f64> {
        let mut f = self.stencils.apply(&self.psi.y, self.lambda);
        if let Some(b) = &self.balance {
            for (v, w) in f.iter_mut().zip(b) {
                *v -= w;
            }
        }
        f
    }

    fn with_values(&self, y: Vec<f64>, dt: f64) -> Self {
        let mut s = self.clone();
        s.psi.y = y;
        s.t += dt;
        s
    }
}

/// Solves a tridiagonal system in place; `lower[0]` and `upper[n-1]` are ignored.
fn thomas(lower: &[f64], diag: &mut [f64], upper: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for i in 1..n {
        if diag[i - 1].abs() < 1e-300 {
            return Err(Error::Stability(format!("zero pivot at row {}", i - 1)));
        }
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
    Ok(())
}

/// One linearly implicit Euler step: `(I - dt J) δ = dt F(ψ)`, boundary values untouched.
pub fn flow_step(state: &FlowState, dt: f64) -> Result<FlowState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Stability(format!("time step {dt} is not positive")));
    }
    let y = &state.psi.y;
    let n = y.len();
    let m = n - 2;
    let st = &state.stencils;
    let f = state.rhs();
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut r = vec![0.0; m];
    for i in 1..n - 1 {
        let (a, b, t) = (&st.a[i], &st.b[i], st.tn[i]);
        let d1 = st.d1(y, i);
        let mut jac = [0.0; 3];
        for j in 0..3 {
            jac[j] = b[j] + 2.0 * y[i] * a[j] - 2.0 * t * a[j];
        }
        jac[1] += 2.0 * d1 - 4.0 * t * y[i];
        let row = i - 1;
        lower[row] = -dt * jac[0];
        diag[row] = 1.0 - dt * jac[1];
        upper[row] = -dt * jac[2];
        r[row] = dt * f[i];
    }
    thomas(&lower, &mut diag, &upper, &mut r)?;
    let mut out = y.clone();
    for i in 1..n - 1 {
        out[i] += r[i - 1];
    }
    if let Some(i) = out.iter().position(|v| !v.is_finite()) {
        return Err(Error::Stability(format!("non-finite value at z = {}", state.psi.x[i])));
    }
    if state.nonpositive {
        if let Some(i) = out.iter().position(|&v| v > boundary_slack(state.k)) {
            return Err(Error::Stability(format!(
                "ψ = {} > 0 at z = {}, t = {}",
                out[i],
                state.psi.x[i],
                state.t + dt
            )));
        }
    }
    Ok(state.with_values(out, dt))
}

/// Fornberg weights for the first derivative at `x0` on `nodes`.
fn fornberg_d1(x0: f64, nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![[0.0f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

/// First derivative from `points`-point Fornberg stencils, centred where the grid allows.
pub fn derivative(f: &GridFunction, points: usize) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(points / 2).min(n.saturating_sub(points));
            let hi = (lo + points).min(n);
            let w = fornberg_d1(f.x[i], &f.x[lo..hi]);
            w.iter().zip(&f.y[lo..hi]).map(|(a, b)| a * b).sum()
        })
        .collect()
}

pub const RESIDUAL_POINTS: usize = 9;

/// Stationary Riccati residual `ψ' + ψ² + π²/D² + c/cs²`: absolute sup and the sup relative
/// to the size of the individual terms.
pub fn riccati_residual(psi: &GridFunction, c: f64, params: &ModelParams) -> (f64, f64) {
    let d = derivative(psi, RESIDUAL_POINTS);
    let base = params.base();
    let mut abs = 0.0f64;
    let mut rel = 0.0f64;
    for ((&z, &y), &dy) in psi.x.iter().zip(&psi.y).zip(&d) {
        let cz = cs(z, params.k);
        let pot = c / (cz * cz);
        let r = dy + y * y + base + pot;
        abs = abs.max(r.abs());
        rel = rel.max(r.abs() / (dy.abs() + y * y + base + pot.abs()));
    }
    (abs, rel)
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowRow {
    pub t: f64,
    pub distance: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub z: Vec<f64>,
    pub psi: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowDiagnostics {
    pub rows: Vec<FlowRow>,
    pub snapshots: Vec<Snapshot>,
    pub steps: usize,
    pub c_k: f64,
    /// Largest step-to-step increase of the distance.
    pub max_distance_increase: f64,
    /// Largest of target - ψ over all logged times.
    pub below_target: f64,
    /// Largest of ψ - ψ(0) over all logged times.
    pub above_initial: f64,
    pub final_distance: f64,
    /// Residual of the final state, absolute and relative.
    pub final_residual: (f64, f64),
}

impl FlowDiagnostics {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,distance,residual\n");
        for r in &self.rows {
            s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", r.t, r.distance, r.residual));
        }
        s
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(f64::NEG_INFINITY, |m, (x, y)| m.max(x - y))
}

/// (log φ_{0,1/k})' on `x`: the forward solution from 0 on the left quarter, the backward
/// solution from ψ(D/2) = -k elsewhere, so both end values are exact.
pub fn robin_target(rp: &RobinProblem, x: &[f64]) -> Result<GridFunction> {
    let mut f = rp.stationary_on(x)?;
    let right = right_branch_on(rp.k, rp.c_k, &rp.params, x)?;
    let split = 0.25 * rp.params.d;
    let end = *x.last().unwrap();
    for (z, y) in f.x.iter().zip(f.y.iter_mut()) {
        if *z >= split && *z >= right.existence.0 && end == rp.params.half() {
            *y = right.psi.interpolate(*z);
        }
    }
    if let Some(last) = f.y.last_mut() {
        if end == rp.params.half() {
            *last = -rp.k;
        }
    }
    Ok(f)
}

/// Evolves `initial` until it is within `tol` of the Robin solution (log φ_{0,1/k})'.
pub fn flow_to_stationary(
    initial: &GridFunction,
    k: f64,
    params: &ModelParams,
    tol: f64,
    opts: &FlowOptions,
) -> Result<(FlowState, FlowDiagnostics)> {
    let rp = RobinProblem::new(k, params)?;
    let target = robin_target(&rp, &initial.x)?;
    let mut state = FlowState::new(initial.clone(), k, params)?;
    if opts.balanced {
        state = state.balanced_against(&target);
    }
    let p = state.params;
    let d2 = p.d * p.d;
    let t_max = opts.t_max_factor * d2;
    let h_min = initial.x.windows(2).fold(f64::INFINITY, |m, w| m.min(w[1] - w[0]));
    let mut dt = opts.dt0_factor * h_min * h_min;
    let dt_max = opts.dt_max_factor * d2;

    let snap_times: Vec<f64> = if opts.snapshots > 1 {
        let lo = dt.max(1e-8 * d2).ln();
        let hi = t_max.ln();
        (0..opts.snapshots).map(|i| (lo + (hi - lo) * i as f64 / (opts.snapshots - 1) as f64).exp()).collect()
    } else {
        Vec::new()
    };
    let mut snaps = Vec::new();
    let mut next_snap = 0;
    if opts.snapshots > 0 {
        snaps.push(Snapshot { t: 0.0, z: initial.x.clone(), psi: initial.y.clone() });
    }

    let residual = |s: &FlowState| riccati_residual(&s.psi, rp.c_k, &p).0;
    let mut distance = state.psi.sup_distance(&target, f64::NEG_INFINITY, f64::INFINITY);
    let mut diag = FlowDiagnostics {
        rows: vec![FlowRow { t: 0.0, distance, residual: residual(&state) }],
        snapshots: Vec::new(),
        steps: 0,
        c_k: rp.c_k,
        max_distance_increase: 0.0,
        below_target: max_diff(&target.y, &state.psi.y),
        above_initial: 0.0,
        final_distance: distance,
        final_residual: (0.0, 0.0),
    };
    while distance > tol {
        if state.t >= t_max || diag.steps >= opts.max_steps {
            diag.final_distance = distance;
            return Err(Error::NoConvergence { distance });
        }
        let step = dt.min(t_max - state.t);
        state = flow_step(&state, step)?;
        diag.steps += 1;
        let nd = state.psi.sup_distance(&target, f64::NEG_INFINITY, f64::INFINITY);
        diag.max_distance_increase = diag.max_distance_increase.max(nd - distance);
        distance = nd;
        diag.below_target = diag.below_target.max(max_diff(&target.y, &state.psi.y));
        diag.above_initial = diag.above_initial.max(max_diff(&state.psi.y, &initial.y));
        diag.rows.push(FlowRow { t: state.t, distance, residual: residual(&state) });
        while next_snap < snap_times.len() && state.t >= snap_times[next_snap] {
            snaps.push(Snapshot { t: state.t, z: state.psi.x.clone(), psi: state.psi.y.clone() });
            next_snap += 1;
        }
        dt = (dt * opts.growth).min(dt_max);
    }
    diag.final_distance = distance;
    diag.final_residual = riccati_residual(&state.psi, rp.c_k, &p);
    diag.snapshots = snaps;
    Ok((state, diag))
}

/// Steps until a full-size step moves ψ by less than `change_tol` in sup norm.
pub fn run_to_equilibrium(mut state: FlowState, change_tol: f64, opts: &FlowOptions) -> Result<FlowState> {
    let d2 = state.params.d * state.params.d;
    let t_max = state.t + opts.t_max_factor * d2;
    let dt_max = opts.dt_max_factor * d2;
    let h_min = state.psi.x.windows(2).fold(f64::INFINITY, |m, w| m.min(w[1] - w[0]));
    let mut dt = opts.dt0_factor * h_min * h_min;
    loop {
        let next = flow_step(&state, dt.min(t_max - state.t))?;
        let change = next.psi.sup_distance(&state.psi, f64::NEG_INFINITY, f64::INFINITY);
        state = next;
        if dt >= dt_max && change <= change_tol {
            return Ok(state);
        }
        if state.t >= t_max {
            return Err(Error::NoConvergence { distance: change });
        }
        dt = (dt * opts.growth).min(dt_max);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub ordered: bool,
    pub samples: usize,
    /// Smallest v - u seen over all sampled times and nodes.
    pub min_margin: f64,
}

/// Evolves target + u and target + v side by side up to time `t_end` and checks u ≤ v.
pub fn comparison_check(
    u: &GridFunction,
    v: &GridFunction,
    params: &ModelParams,
    k: f64,
    t_end: f64,
) -> Result<ComparisonReport> {
    if u.x != v.x {
        return Err(Error::Domain("u and v must share a grid".into()));
    }
    let n = u.len() - 1;
    for w in [u, v] {
        if w.y[0].abs() > boundary_slack(k) || w.y[n].abs() > boundary_slack(k) {
            return Err(Error::Domain("u and v must vanish at both ends".into()));
        }
    }
    let rp = RobinProblem::new(k, params)?;
    let target = robin_target(&rp, &u.x)?;
    let lift = |w: &GridFunction| {
        let y = target.y.iter().zip(&w.y).map(|(a, b)| a + b).collect();
        FlowState::new(GridFunction::new(w.x.clone(), y), k, params).map(|s| s.balanced_against(&target))
    };
    let mut a = lift(u)?;
    let mut b = lift(v)?;
    let slack = 1e-10 * (1.0 + k);
    let check = |a: &FlowState, b: &FlowState, min: &mut f64| -> Result<()> {
        for i in 0..=n {
            let m = b.psi.y[i] - a.psi.y[i];
            *min = min.min(m);
            if m < -slack {
                return Err(Error::OrderingViolation { z: a.psi.x[i], t: a.t });
            }
        }
        Ok(())
    };
    let mut min_margin = f64::INFINITY;
    check(&a, &b, &mut min_margin)?;
    let h_min = u.x.windows(2).fold(f64::INFINITY, |m, w| m.min(w[1] - w[0]));
    let d2 = params.d * params.d;
    let mut dt = 0.25 * h_min * h_min;
    let mut samples = 1;
    while a.t < t_end {
        let step = dt.min(t_end - a.t);
        a = flow_step(&a, step)?;
        b = flow_step(&b, step)?;
        check(&a, &b, &mut min_margin)?;
        samples += 1;
        dt = (dt * 1.1).min(2e-3 * d2);
    }
    Ok(ComparisonReport { ordered: true, samples, min_margin })
}
