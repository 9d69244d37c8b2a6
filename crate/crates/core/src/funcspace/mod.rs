//! Function representations and norms: grid functions, the closed-form
//! power-log family, exponent classification, strong and weak Lebesgue norms
//! and the embedding inequalities between them.

mod closed_form;
mod exponents;
mod grid;
pub mod mesh;
mod norms;

pub use closed_form::ClosedFormFunction;
pub(crate) use exponents::critical_exponent as critical_exponent_of;
pub use exponents::{CompactCase, ExponentTriple, Regime};
pub use grid::{GridFunction, VectorNorm};
pub(crate) use norms::signed_cell_power_integral;
pub use norms::{
    chebyshev_check, distribution_function, embedding_check, lp_norm, weak_lp_argmax, weak_lp_quasinorm, LpNorm,
    WeakNormArgmax,
};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Interval `[start, end]`; `end` may be `+∞` for half-line supports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !start.is_finite() || end.is_nan() || end <= start {
            return domain(format!("empty or invalid interval [{start}, {end}]"));
        }
        Ok(Interval { start, end })
    }

    pub fn unit() -> Self {
        Interval { start: 0.0, end: 1.0 }
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_bounded(&self) -> bool {
        self.end.is_finite()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }
}
