//! Adaptive Gauss–Kronrod 7/15.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = r * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * r, ((kron - gauss) * r).abs())
}

fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: (f64, f64), tol: f64, depth: u32) -> f64 {
    let (v, e) = whole;
    if e <= tol || depth == 0 {
        return v;
    }
    let m = 0.5 * (a + b);
    let l = gk15(f, a, m);
    let r = gk15(f, m, b);
    recurse(f, a, m, l, 0.5 * tol, depth - 1) + recurse(f, m, b, r, 0.5 * tol, depth - 1)
}

/// ∫_a^b f with absolute error target `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let whole = gk15(&f, a, b);
    recurse(&f, a, b, whole, tol, 40)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_and_trig() {
        assert!((integrate(|x| x.powi(5), 0.0, 2.0, 1e-13) - 64.0 / 6.0).abs() < 1e-12);
        let v = integrate(|x| x * x * x.cos().powi(2), -PI / 2.0, PI / 2.0, 1e-13);
        assert!((v - (PI.powi(3) / 24.0 - PI / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn steep() {
        let v = integrate(|x| 1.0 / (x.cos().powi(2)), 0.0, 1.5, 1e-12);
        assert!((v - 1.5f64.tan()).abs() < 1e-10);
    }
}
