use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Position of a target exponent `q` relative to the critical exponent
/// `p/(1-pα)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

/// The three mutually exclusive conclusions available for `J^α: L^p → L^q`
/// on a bounded interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactCase {
    /// Compact operator.
    Compact,
    /// Bounded but not compact.
    BoundedNotCompact,
    /// Not even bounded.
    Unbounded,
}

/// Source exponent `p`, order `α` and target exponent `q` (possibly `+∞`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentTriple {
    pub p: f64,
    pub alpha: f64,
    pub q: f64,
}

const CRITICAL_RTOL: f64 = 1e-12;

impl ExponentTriple {
    pub fn new(p: f64, alpha: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return domain(format!("p must be finite and >= 1, got {p}"));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return domain(format!("alpha must be positive, got {alpha}"));
        }
        if q.is_nan() || q < 1.0 {
            return domain(format!("q must be >= 1 or infinite, got {q}"));
        }
        Ok(ExponentTriple { p, alpha, q })
    }

    /// `p/(1-pα)` when `pα < 1`, otherwise `+∞`.
    pub fn critical_exponent(&self) -> f64 {
        critical_exponent(self.p, self.alpha)
    }

    /// Exactly one regime per triple. When `pα ≥ 1` every `q` counts as
    /// subcritical, since no finite critical exponent exists.
    pub fn classify(&self) -> Regime {
        if self.p * self.alpha >= 1.0 {
            return Regime::Subcritical;
        }
        let crit = self.critical_exponent();
        if self.q.is_finite() && (self.q - crit).abs() <= CRITICAL_RTOL * crit {
            Regime::Critical
        } else if self.q < crit {
            Regime::Subcritical
        } else {
            Regime::Supercritical
        }
    }

    /// Compactness verdict for `p > 1`, `α < 1/p`.
    pub fn compact_case(&self) -> Option<CompactCase> {
        if self.p <= 1.0 || self.p * self.alpha >= 1.0 {
            return None;
        }
        Some(match self.classify() {
            Regime::Subcritical => CompactCase::Compact,
            Regime::Critical => CompactCase::BoundedNotCompact,
            Regime::Supercritical => CompactCase::Unbounded,
        })
    }
}

pub(crate) fn critical_exponent(p: f64, alpha: f64) -> f64 {
    if p * alpha >= 1.0 {
        f64::INFINITY
    } else {
        p / (1.0 - p * alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        let t = |q| ExponentTriple::new(2.0, 0.25, q).unwrap().classify();
        assert_eq!(t(3.0), Regime::Subcritical);
        assert_eq!(t(4.0), Regime::Critical);
        assert_eq!(t(8.0), Regime::Supercritical);
        assert_eq!(t(f64::INFINITY), Regime::Supercritical);
        let big = ExponentTriple::new(2.0, 0.5, 100.0).unwrap();
        assert_eq!(big.classify(), Regime::Subcritical);
        assert_eq!(big.critical_exponent(), f64::INFINITY);
    }

    #[test]
    fn compact_cases() {
        let c = |q| ExponentTriple::new(2.0, 0.25, q).unwrap().compact_case();
        assert_eq!(c(3.0), Some(CompactCase::Compact));
        assert_eq!(c(4.0), Some(CompactCase::BoundedNotCompact));
        assert_eq!(c(5.0), Some(CompactCase::Unbounded));
        assert_eq!(ExponentTriple::new(1.0, 0.5, 1.5).unwrap().compact_case(), None);
    }

    #[test]
    fn validation() {
        assert!(ExponentTriple::new(0.5, 0.25, 2.0).is_err());
        assert!(ExponentTriple::new(2.0, 0.0, 2.0).is_err());
        assert!(ExponentTriple::new(2.0, 0.25, 0.5).is_err());
    }
}
