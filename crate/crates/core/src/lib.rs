//! Eigenvalue problems, Riccati constructions, perturbation series and a parabolic flow
//! for the one-dimensional model of the fundamental gap in constant-curvature spaces.

pub mod bounds;
pub mod cli;
pub mod dd;
pub mod error;
pub mod flow;
pub mod grid;
pub mod kernels;
pub mod model;
pub mod ode;
pub mod pruefer;
pub mod quadrature;
pub mod roots;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::GridFunction;
pub use model::ModelParams;
