//! Gamma function and the continuous profile used to bound kernel differences
//! in the translation-modulus estimate.

use crate::error::{domain, Result};
use crate::quad::{self, Tolerance};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the series in its accurate range.
        let pi = std::f64::consts::PI;
        (pi / (pi * x).sin()).ln() - lanczos_ln_gamma(1.0 - x)
    } else {
        let z = x - 1.0;
        let mut a = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            a += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
    }
}

/// `ln Γ(x)` for finite `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return domain(format!("log_gamma requires a finite positive argument, got {x}"));
    }
    Ok(lanczos_ln_gamma(x))
}

/// `Γ(x)` for `x > 0`, evaluated as `exp(ln Γ(x))`.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}

/// Infallible gamma for internal callers that have validated their argument.
pub(crate) fn gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    lanczos_ln_gamma(x).exp()
}

/// Exponents `0 < beta < alpha < 1` of the profile `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaProfileParams {
    alpha: f64,
    beta: f64,
}

impl DeltaProfileParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0 < beta && beta < alpha && alpha < 1.0) {
            return domain(format!("profile parameters need 0 < beta < alpha < 1, got alpha={alpha}, beta={beta}"));
        }
        Ok(DeltaProfileParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `∫_t^1 (1-w)^{-β} w^{α-2} dw` for `t ∈ (0, 1)`.
///
/// Below `w = 1/2` the integral runs in `s = ln w`, which flattens the
/// `w^{α-2}` growth near small `t`. The part touching `w = 1` uses
/// `w = 1 - L u^{1/(1-β)}`, under which the integrand is bounded.
pub fn tail_integral(t: f64, params: DeltaProfileParams) -> f64 {
    let DeltaProfileParams { alpha, beta } = params;
    let tol = Tolerance::rel(1e-13);
    let (split, low) = if t < 0.5 {
        let low = quad::integrate(
            |s: f64| {
                let w = s.exp();
                (1.0 - w).powf(-beta) * w.powf(alpha - 1.0)
            },
            t.ln(),
            0.5f64.ln(),
            tol,
        );
        (0.5, low)
    } else {
        (t, 0.0)
    };
    let span = 1.0 - split;
    let expo = 1.0 / (1.0 - beta);
    let high = quad::integrate(
        |u: f64| {
            let w = 1.0 - span * u.powf(expo);
            w.powf(alpha - 2.0)
        },
        0.0,
        1.0,
        tol,
    ) * span.powf(1.0 - beta)
        / (1.0 - beta);
    low + high
}

/// `δ(t) = t^{β+1-α} ∫_t^1 (1-w)^{-β} w^{α-2} dw`, extended by 0 at both ends.
pub fn delta_profile(t: f64, params: DeltaProfileParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return domain(format!("delta_profile requires t in [0, 1], got {t}"));
    }
    if t == 0.0 || t == 1.0 {
        return Ok(0.0);
    }
    Ok(t.powf(params.beta + 1.0 - params.alpha) * tail_integral(t, params))
}

const SCAN_POINTS: usize = 4096;

/// `max_{[0,1]} δ`, located by a 4096-point scan followed by golden-section
/// refinement around the best scan point.
pub fn delta_max(params: DeltaProfileParams) -> f64 {
    let eval = |t: f64| delta_profile(t, params).unwrap_or(0.0);
    let h = 1.0 / SCAN_POINTS as f64;
    let (best_i, best_v) = (1..SCAN_POINTS)
        .map(|i| (i, eval(i as f64 * h)))
        .fold((1, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });

    let (mut a, mut b) = ((best_i - 1) as f64 * h, (best_i + 1) as f64 * h);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
        if b - a < 1e-15 {
            break;
        }
    }
    best_v.max(fc).max(fd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_known_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        let half = log_gamma(0.5).unwrap();
        assert!((half - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        assert!((half - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn log_gamma_rejects_bad_input() {
        for x in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(log_gamma(x).is_err(), "{x}");
        }
    }

    #[test]
    fn params_validation() {
        assert!(DeltaProfileParams::new(0.5, 0.25).is_ok());
        assert!(DeltaProfileParams::new(0.5, 0.5).is_err());
        assert!(DeltaProfileParams::new(1.0, 0.5).is_err());
        assert!(DeltaProfileParams::new(0.5, 0.0).is_err());
    }

    #[test]
    fn profile_vanishes_at_ends_and_rejects_outside() {
        let p = DeltaProfileParams::new(0.5, 0.25).unwrap();
        assert_eq!(delta_profile(0.0, p).unwrap(), 0.0);
        assert_eq!(delta_profile(1.0, p).unwrap(), 0.0);
        assert!(delta_profile(-0.1, p).is_err());
        assert!(delta_profile(1.1, p).is_err());
    }

    #[test]
    fn one_sided_limits_decrease_to_zero() {
        let p = DeltaProfileParams::new(0.5, 0.25).unwrap();
        let mut prev_lo = f64::INFINITY;
        let mut prev_hi = f64::INFINITY;
        for k in 2..=6 {
            let e = 10f64.powi(-k);
            let lo = delta_profile(e, p).unwrap();
            let hi = delta_profile(1.0 - e, p).unwrap();
            assert!(lo >= 0.0 && hi >= 0.0);
            assert!(lo < prev_lo && hi < prev_hi, "k={k}");
            prev_lo = lo;
            prev_hi = hi;
        }
        // δ(t) ~ t^β / (1-α) as t → 0
        let asym = 1e-6f64.powf(0.25) / 0.5;
        assert!((prev_lo - asym).abs() < 1e-3 * asym);
        assert!(prev_hi < 1e-3);
    }

    #[test]
    fn max_dominates_samples_near_degenerate_parameters() {
        let p = DeltaProfileParams::new(0.5, 0.5 - 1e-6).unwrap();
        let m = delta_max(p);
        assert!(m.is_finite() && m > 0.0);
        for i in 1..100 {
            let t = i as f64 / 100.0;
            assert!(delta_profile(t, p).unwrap() <= m * (1.0 + 1e-12));
        }
    }
}
