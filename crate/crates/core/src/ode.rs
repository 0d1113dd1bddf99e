//! Dormand–Prince 5(4) with step-size control, landing exactly on requested nodes.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub atol: f64,
    pub rtol: f64,
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self { atol: 1e-12, rtol: 1e-12, max_steps: 2_000_000 }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b*, the embedded error weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` through each node in `nodes` (monotone, in the
/// direction of integration) and returns the state at every node.
///
/// `observe` sees every accepted step; returning `false` stops the integration early,
/// in which case the returned vector is shorter than `nodes`.
pub fn solve<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    nodes: &[f64],
    opts: &Options,
    mut observe: O,
) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]) -> bool,
{
    let mut out = Vec::with_capacity(nodes.len());
    let Some(&t_end) = nodes.last() else { return Ok(out) };
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = (span * 1e-3).max(1e-10);
    let mut steps = 0usize;
    let mut next = 0usize;
    while next < nodes.len() && (nodes[next] - t) * dir <= 0.0 {
        out.push(y);
        next += 1;
    }
    while next < nodes.len() {
        let target = nodes[next];
        let room = (target - t).abs();
        let last = h >= room;
        let step = if last { room } else { h };
        let hs = dir * step;
        let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * hs, &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(
            t + hs,
            &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + hs, &y_new);
        let mut err = 0.0;
        for i in 0..N {
            let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / N as f64).sqrt();
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::NonConvergence(format!("ODE step budget exhausted at t = {t}")));
        }
        if !err.is_finite() {
            h *= 0.25;
            if h < 1e-15 * (1.0 + t.abs()) {
                return Err(Error::NonConvergence(format!("non-finite derivative near t = {t}")));
            }
            continue;
        }
        if err <= 1.0 {
            t = if last { target } else { t + hs };
            y = y_new;
            k1 = k7;
            if last {
                out.push(y);
                next += 1;
                while next < nodes.len() && (nodes[next] - t) * dir <= 0.0 {
                    out.push(y);
                    next += 1;
                }
            }
            if !observe(t, &y) {
                return Ok(out);
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            // keep the controller's h when a short final step was taken to hit a node
            if !last || step >= h {
                h = step * fac;
            }
        } else {
            h = step * (0.9 * err.powf(-0.2)).max(0.1);
            if h < 1e-15 * (1.0 + t.abs()) {
                return Err(Error::NonConvergence(format!("step size underflow at t = {t}")));
            }
        }
    }
    Ok(out)
}

/// State at `t_end` only.
pub fn solve_to<const N: usize, F>(f: F, t0: f64, y0: [f64; N], t_end: f64, opts: &Options) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    Ok(solve(f, t0, y0, &[t_end], opts, |_, _| true)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let y = solve_to(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], 2.0, &Options::default()).unwrap();
        assert!((y[0] - 2f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn oscillator_on_nodes_and_backward() {
        let nodes: Vec<f64> = (0..=10).map(|i| i as f64 * 0.3).collect();
        let ys = solve(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], &nodes, &Options::default(), |_, _| true).unwrap();
        for (t, y) in nodes.iter().zip(&ys) {
            assert!((y[0] - t.sin()).abs() < 1e-11);
        }
        let back = solve_to(|_, y: &[f64; 2]| [y[1], -y[0]], 3.0, [3f64.sin(), 3f64.cos()], 0.0, &Options::default()).unwrap();
        assert!(back[0].abs() < 1e-11 && (back[1] - 1.0).abs() < 1e-11);
    }

    #[test]
    fn early_stop() {
        let ys = solve(|_, _: &[f64; 1]| [1.0], 0.0, [0.0], &[1.0, 2.0], &Options::default(), |_, y| y[0] < 0.5).unwrap();
        assert!(ys.is_empty() || ys.len() == 1);
    }
}
