use crate::error::{domain, Result};
use crate::quad::{self, Tolerance};

use super::{GridFunction, Interval, VectorNorm};

/// `c (t-t0)^{-β} (ln(κ/(t-t0)))^{-γ} x` on `support`, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormFunction {
    t0: f64,
    support: Interval,
    scale: f64,
    beta: f64,
    log_exponent: f64,
    log_scale: f64,
    direction: Vec<f64>,
    norm: VectorNorm,
}

impl ClosedFormFunction {
    /// Pure power `c (t-t0)^{-β}` on `support` with scalar direction `1`.
    pub fn power(t0: f64, support: Interval, scale: f64, beta: f64) -> Result<Self> {
        Self::new(t0, support, scale, beta, 0.0, 1.0, vec![1.0], VectorNorm::Euclidean)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        t0: f64,
        support: Interval,
        scale: f64,
        beta: f64,
        log_exponent: f64,
        log_scale: f64,
        direction: Vec<f64>,
        norm: VectorNorm,
    ) -> Result<Self> {
        if !t0.is_finite() || support.start < t0 {
            return domain(format!("support [{}, {}] must lie in [t0, ∞) with t0 = {t0}", support.start, support.end));
        }
        if !(scale.is_finite() && beta.is_finite()) {
            return domain("scale and beta must be finite");
        }
        if !(log_exponent.is_finite() && log_exponent >= 0.0) {
            return domain(format!("log exponent must be >= 0, got {log_exponent}"));
        }
        if !(log_scale.is_finite() && log_scale > 0.0) {
            return domain(format!("log scale must be positive, got {log_scale}"));
        }
        if log_exponent > 0.0 && !(log_scale / (support.end - t0) > 1.0) {
            return domain(format!(
                "log scale {log_scale} must exceed the support length from t0 ({})",
                support.end - t0
            ));
        }
        if direction.is_empty() || (norm.apply(&direction) - 1.0).abs() > 1e-12 {
            return domain("direction must be a unit vector in the chosen norm");
        }
        Ok(ClosedFormFunction { t0, support, scale, beta, log_exponent, log_scale, direction, norm })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn log_exponent(&self) -> f64 {
        self.log_exponent
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn vector_norm(&self) -> VectorNorm {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// Scalar profile `c (t-t0)^{-β} (ln(κ/(t-t0)))^{-γ}` (zero off the support).
    pub fn profile(&self, t: f64) -> f64 {
        if !self.support.contains(t) {
            return 0.0;
        }
        if t <= self.t0 {
            // Only the constant member is nonzero and finite at t0.
            let constant = self.beta == 0.0 && self.log_exponent == 0.0;
            return if constant { self.scale } else { 0.0 };
        }
        let u = t - self.t0;
        let mut v = self.scale * u.powf(-self.beta);
        if self.log_exponent > 0.0 {
            v *= (self.log_scale / u).ln().powf(-self.log_exponent);
        }
        v
    }

    pub fn value_at(&self, t: f64) -> Vec<f64> {
        let s = self.profile(t);
        self.direction.iter().map(|x| s * x).collect()
    }

    /// Samples on `nodes`; nodes must avoid any singularity at `t0`.
    pub fn sample(&self, nodes: &[f64]) -> Result<GridFunction> {
        GridFunction::sample_along(nodes, &self.direction, self.norm, |t| self.profile(t))
    }

    /// `(∫_a^b |profile|^p dt)^{1/p}` over `[a, b] ∩ support`, `+∞` when divergent.
    pub(crate) fn lp_norm_on(&self, p: f64, interval: Interval) -> f64 {
        let a = interval.start.max(self.support.start);
        let b = interval.end.min(self.support.end);
        if a >= b || self.scale == 0.0 {
            return 0.0;
        }
        let (ua, ub) = (a - self.t0, b - self.t0);
        let c = self.scale.abs();
        if p.is_infinite() {
            return c * self.sup_on(ua, ub);
        }
        if self.log_exponent == 0.0 {
            c * power_integral(self.beta * p, ua, ub).powf(1.0 / p)
        } else {
            let gp = self.log_exponent * p;
            let kappa = self.log_scale;
            let s_lo = (kappa / ub).ln();
            let s_hi = if ua == 0.0 { f64::INFINITY } else { (kappa / ua).ln() };
            let e = self.beta * p - 1.0;
            let integral = log_power_integral(e, gp, s_lo, s_hi);
            c * (kappa.powf(-e) * integral).powf(1.0 / p)
        }
    }

    fn sup_on(&self, ua: f64, ub: f64) -> f64 {
        let shape = |u: f64| {
            let mut v = u.powf(-self.beta);
            if self.log_exponent > 0.0 {
                v *= (self.log_scale / u).ln().powf(-self.log_exponent);
            }
            v
        };
        if self.log_exponent == 0.0 {
            return if self.beta > 0.0 {
                if ua == 0.0 {
                    f64::INFINITY
                } else {
                    ua.powf(-self.beta)
                }
            } else if self.beta < 0.0 {
                ub.powf(-self.beta)
            } else {
                1.0
            };
        }
        if ua == 0.0 && self.beta > 0.0 {
            return f64::INFINITY;
        }
        let lo = if ua == 0.0 { ub * 1e-300_f64.max(f64::MIN_POSITIVE) } else { ua };
        let (la, lb) = (lo.ln(), ub.ln());
        let n = 2000;
        let mut best = shape(ub).max(shape(lo));
        for i in 1..n {
            best = best.max(shape((la + (lb - la) * i as f64 / n as f64).exp()));
        }
        best
    }
}

/// `∫_{ua}^{ub} u^{-e} du`, `+∞` when divergent.
fn power_integral(e: f64, ua: f64, ub: f64) -> f64 {
    let k = 1.0 - e;
    if k.abs() < 1e-14 {
        if ua == 0.0 || ub.is_infinite() {
            f64::INFINITY
        } else {
            (ub / ua).ln()
        }
    } else if k > 0.0 {
        if ub.is_infinite() {
            f64::INFINITY
        } else {
            (ub.powf(k) - ua.powf(k)) / k
        }
    } else if ua == 0.0 {
        f64::INFINITY
    } else {
        let top = if ub.is_infinite() { 0.0 } else { ub.powf(k) };
        (ua.powf(k) - top) / (-k)
    }
}

/// `∫_{s_lo}^{s_hi} e^{e s} s^{-g} ds` with `s_lo > 0`, `+∞` when divergent.
fn log_power_integral(e: f64, g: f64, s_lo: f64, s_hi: f64) -> f64 {
    let tol = Tolerance::rel(1e-12);
    if e.abs() < 1e-14 {
        return power_integral(g, s_lo, s_hi);
    }
    if s_hi.is_infinite() {
        if e > 0.0 {
            return f64::INFINITY;
        }
        return quad::integrate_to_infinity(|s| (e * s).exp() * s.powf(-g), s_lo, tol);
    }
    quad::integrate(|s| (e * s).exp() * s.powf(-g), s_lo, s_hi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::unit()
    }

    #[test]
    fn power_norms() {
        let f = ClosedFormFunction::power(0.0, unit(), 1.0, 0.5).unwrap();
        assert_eq!(f.lp_norm_on(2.0, unit()), f64::INFINITY);
        assert!((f.lp_norm_on(1.0, unit()) - 2.0).abs() < 1e-14);
        let g = ClosedFormFunction::power(0.0, unit(), 3.0, 0.0).unwrap();
        assert!((g.lp_norm_on(2.0, unit()) - 3.0).abs() < 1e-14);
        assert_eq!(g.lp_norm_on(f64::INFINITY, unit()), 3.0);
    }

    #[test]
    fn log_family_l1_norm() {
        let beta = 1.5;
        let f = ClosedFormFunction::new(0.0, unit(), 2.0, 1.0, beta, 2.0, vec![1.0], VectorNorm::Euclidean).unwrap();
        let expect = 2.0 * 2f64.ln().powf(1.0 - beta) / (beta - 1.0);
        assert!((f.lp_norm_on(1.0, unit()) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn invariants_enforced() {
        assert!(ClosedFormFunction::new(0.0, unit(), 1.0, 1.0, 1.0, 1.0, vec![1.0], VectorNorm::Max).is_err());
        assert!(ClosedFormFunction::new(0.0, unit(), 1.0, 0.5, 0.0, 1.0, vec![0.5], VectorNorm::Max).is_err());
        assert!(ClosedFormFunction::power(1.0, unit(), 1.0, 0.5).is_err());
    }

    #[test]
    fn shifted_support_is_zero_before() {
        let s = Interval::new(1.0, f64::INFINITY).unwrap();
        let f = ClosedFormFunction::power(0.0, s, 1.0, 0.75).unwrap();
        assert_eq!(f.profile(0.5), 0.0);
        assert!((f.profile(4.0) - 4f64.powf(-0.75)).abs() < 1e-15);
        // ∫_1^∞ t^{-1.5} dt = 2
        let n = f.lp_norm_on(2.0, Interval::new(0.0, f64::INFINITY).unwrap());
        assert!((n - 2f64.sqrt()).abs() < 1e-14);
    }
}
