//! Numerical laboratory for the Riemann–Liouville fractional integral on
//! vector-valued Lebesgue spaces.
//!
//! The crate evaluates `J^α f(t) = Γ(α)^{-1} ∫_{t0}^t (t-s)^{α-1} f(s) ds` on
//! grids and on a closed-form power-log family, computes strong and weak
//! Lebesgue norms, tabulates the constants of the boundedness theory, and
//! produces reports that check each inequality, its sharpness and the
//! compactness of the operator below the critical exponent.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod compactness;
pub mod counterexamples;
mod error;
pub mod fracderiv;
pub mod fracint;
pub mod funcspace;
pub mod quad;
pub mod random;
pub mod report;
pub mod special;

pub use error::{FracError, Result};
pub use funcspace::{ClosedFormFunction, ExponentTriple, GridFunction, Interval, Regime, VectorNorm};
pub use report::{BoundContext, BoundReport, InequalityId};
