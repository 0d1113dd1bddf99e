//! Exact asymptotic expansion of λ̄₁, λ̄₂ and the gap in powers of κ = K D².

pub mod dimpoly;
pub mod modulus;
pub mod pilaurent;
pub mod published;
pub mod recurrence;
pub mod trigpoly;

pub use dimpoly::NPoly;
pub use modulus::{modulus_expansion, ModulusReport};
pub use pilaurent::PiLaurent;
pub use recurrence::{
    branch_pair, eval_kappa_series_dd, eval_series, gap_series, lambda_series, lambda_series_capped, sec2_coeffs,
    Branch, SeriesOrder, SeriesResult, DEFAULT_ORDER_CAP,
};
pub use trigpoly::{solve_resonant, Basis, TrigPoly};
