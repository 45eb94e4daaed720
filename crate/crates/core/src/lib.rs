//! Numerical companion to sharp regularity estimates for quasilinear
//! equations of p-Laplacian type with weighted absorption,
//!
//! ```text
//! div(a(|x|) |∇u|^{p-2} ∇u) = h(|x|) u_+^m   in B_1 ⊂ R^n.
//! ```
//!
//! * [`closed_forms`]: exponents, constants and exact power-law solutions.
//! * [`radial`]: flux-form ODE integrator and shooting for radial problems.
//! * [`grid`]: planar finite-difference solver on the unit disc.
//! * [`analysis`]: growth, oscillation and non-degeneracy measurements.
//! * [`liouville`]: comparison barriers and the borderline case `m = p - 1`.
//!
//! ```
//! use phenon::closed_forms::{growth_exponent, radial_model_solution, ExponentParams};
//! use phenon::radial::solve_bvp;
//! use phenon::ProblemSpec;
//!
//! let params = ExponentParams::new(2, 2.0, 0.5, 0.0);
//! assert_eq!(growth_exponent(&params).unwrap(), 4.0);
//! let exact = radial_model_solution(&params).unwrap();
//!
//! let spec = ProblemSpec::power(2, 2.0, 0.5, 0.0, 0.0);
//! let sol = solve_bvp(&spec, exact.value(1.0), 1.0, 1e-8).unwrap();
//! assert!((sol.value_at(0.5) - exact.value(0.5)).abs() < 1e-8 * exact.value(0.5));
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod closed_forms;
pub mod error;
pub mod grid;
pub mod liouville;
pub mod problem;
pub mod radial;

pub use error::{Error, Result};
pub use problem::{ProblemSpec, ProblemSpec2D, Source2D, SourceSpec, WeightSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exponents.md")]
    mod exponents {}
    #[doc = include_str!("../../../book/src/radial.md")]
    mod radial {}
    #[doc = include_str!("../../../book/src/grid.md")]
    mod grid {}
    #[doc = include_str!("../../../book/src/measurement.md")]
    mod measurement {}
    #[doc = include_str!("../../../book/src/liouville.md")]
    mod liouville {}
}
