//! Closed forms as printed in the literature for orders 1–5, kept verbatim (including the
//! inconsistent ones) so the exact engine can be checked against them.

use super::dimpoly::NPoly;
use super::pilaurent::{q, PiLaurent};
use super::recurrence::Branch;

fn pl(t: &[(i32, i64, i64)]) -> PiLaurent {
    PiLaurent::from_terms(&t.iter().map(|&(e, a, b)| (e, q(a, b))).collect::<Vec<_>>())
}

fn u() -> NPoly {
    NPoly::u_factor()
}

fn u2() -> NPoly {
    &u() * &u()
}

/// κ-coefficients of D²λ̄ for orders 0..=3.
pub fn kappa_low(branch: Branch) -> Vec<NPoly> {
    let nm1_half = NPoly::from_rationals(&[q(1, 2), q(-1, 2)]);
    match branch {
        Branch::First => vec![
            NPoly::constant(pl(&[(2, 1, 1)])),
            nm1_half,
            u().scale_pi(&pl(&[(0, 1, 48), (-2, -6, 48)])),
            u().scale_pi(&pl(&[(0, 1, 480), (-2, -20, 480), (-4, 120, 480)])),
        ],
        Branch::Second => vec![
            NPoly::constant(pl(&[(2, 4, 1)])),
            nm1_half,
            u().scale_pi(&pl(&[(0, 1, 48), (-2, -3, 96)])),
            u().scale_pi(&pl(&[(0, 1, 480), (-2, -5, 480), (-4, 15, 960)])),
        ],
    }
}

/// κ-coefficients of D²(λ̄₂ - λ̄₁) for orders 0..=3.
pub fn gap_kappa_low() -> Vec<NPoly> {
    vec![
        NPoly::constant(pl(&[(2, 3, 1)])),
        NPoly::zero(),
        u().scale_pi(&pl(&[(-2, 3, 32)])),
        u().scale_pi(&pl(&[(-2, 15, 480), (-4, -225, 960)])),
    ]
}

/// The two bracketed constants (of u²/24² and u/24) in the order-4 eigenvalue at D = π.
pub fn order4_constants(branch: Branch) -> (PiLaurent, PiLaurent) {
    match branch {
        Branch::First => (
            pl(&[(4, 1, 20), (2, -75, 20), (0, 630, 20)]),
            pl(&[(6, 17, 3360), (4, -17 * 42, 3360), (2, 17 * 840, 3360), (0, -17 * 5040, 3360)]),
        ),
        Branch::Second => (
            pl(&[(4, 8, 640), (2, -150, 640), (0, 315, 640)]),
            pl(&[(6, 68, 13440), (4, -17 * 42, 13440), (2, 17 * 210, 13440), (0, -17 * 315, 13440)]),
        ),
    }
}

/// Same pair for the gap.
pub fn order4_gap_constants() -> (PiLaurent, PiLaurent) {
    (
        pl(&[(2, 2250, 640), (4, -24, 640), (0, -19845, 640)]),
        pl(&[(4, 102, 640), (2, -2550, 640), (0, 16065, 640)]),
    )
}

/// Decimal renderings printed next to the order-4 constants.
pub const ORDER4_DECIMALS: [(&str, f64); 6] = [
    ("lambda1 (u/24)^2", -0.64),
    ("lambda1 (u/24)", 0.61),
    ("lambda2 (u/24)^2", -0.603),
    ("lambda2 (u/24)", 1.912),
    ("gap (u/24)^2", 0.037),
    ("gap (u/24)", 1.301),
];

pub fn order4(branch: Branch) -> NPoly {
    let (a, b) = order4_constants(branch);
    &u2().scale(&q(1, 576)).scale_pi(&a) + &u().scale(&q(1, 24)).scale_pi(&b)
}

/// (62/315) ∫ x⁸ cos²x and (62/315) ∫ x⁸ sin²2x over [-π/2, π/2].
pub fn x8_integrals() -> (PiLaurent, PiLaurent) {
    let c = pl(&[(1, 362880, 1), (3, -60480, 1), (5, 3024, 1), (7, -72, 1), (9, 1, 1)]).scale(&q(62, 315 * 4608));
    let s = pl(&[(1, 2835, 1), (3, -1890, 1), (5, 378, 1), (7, -36, 1), (9, 2, 1)]).scale(&q(31, 1451520));
    (c, s)
}

/// Order-5 inner products printed as closed forms, each given per unit of the stated
/// prefactor: (∫y12 y13, ∫y12' y13') per u²/24², (∫y22 y23) per u²/48², (∫y22' y23') per u²/48².
pub fn order5_inner_products() -> [PiLaurent; 4] {
    let a = pl(&[(1, -15570, 1), (3, 2220, 1), (5, -67, 1), (7, 13, 168), (9, 4, 315)]).scale(&q(1, 160));
    let b = pl(&[(1, 1710, 1), (3, -300, 1), (5, 17, 1), (7, -83, 168), (9, 4, 315)]).scale(&q(1, 160));
    let c = pl(&[(1, -7785, 128), (3, 555, 16), (5, -67, 16), (7, 13, 672), (9, 4, 315)]).scale(&q(1, 160));
    let d = pl(&[(1, 855, 32), (3, -75, 4), (5, 17, 4), (7, -83, 168), (9, 16, 315)]).scale(&q(1, 160));
    [a, b, c, d]
}

/// Printed closed forms for the order-5 eigenvalue at D = π.
pub fn order5(branch: Branch) -> NPoly {
    let (c, s) = x8_integrals();
    match branch {
        Branch::First => {
            let quad = pl(&[(0, -30240, 70), (2, 4410, 70), (4, -147, 70), (6, 1, 70)]);
            &u2().scale(&q(1, 576)).scale_pi(&quad) + &u().scale_pi(&c.shift_pi(-1).scale(&q(1, 2)))
        }
        Branch::Second => {
            let quad = pl(&[(0, -2241, 1024), (2, 171, 128), (4, -27, 128), (6, 23, 1792), (8, -1, 1050)]);
            &u2().scale(&q(1, 2304)).scale_pi(&quad) + &u().scale_pi(&s.shift_pi(-1).scale(&q(1, 2)))
        }
    }
}

/// Decimal renderings printed with the order-5 results: (u/24)² factor and u/(2π) factor.
pub const ORDER5_DECIMALS: [(&str, f64, f64); 3] = [
    ("lambda1", -1.039, 0.10734),
    ("lambda2", -1.561, 0.35024),
    ("gap", -0.522, 0.2429),
];
