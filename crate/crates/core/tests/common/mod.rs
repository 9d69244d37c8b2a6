//! Reference values computed independently of the library: tanh-sinh
//! quadrature, a shifted Stirling series for ln Γ, and direct evaluation of
//! the constant formulas.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

/// Tanh-sinh quadrature on `[a, b]`; robust to integrable endpoint singularities.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let node = |t: f64| -> Option<(f64, f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        // 1 - tanh(u), computed without cancellation
        let d = 2.0 / (1.0 + (2.0 * u).exp());
        let w = half * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        let off = half * d;
        if off <= 0.0 || !w.is_finite() || w == 0.0 {
            None
        } else {
            Some((a + off, b - off, w))
        }
    };
    let sum_at = |h: f64, odd_only: bool| -> f64 {
        let mut s = 0.0;
        let mut k = if odd_only { 1 } else { 0 };
        loop {
            let t = k as f64 * h;
            if t > 6.5 {
                break;
            }
            match node(t) {
                None => break,
                Some((lo, hi, w)) => {
                    if k == 0 {
                        s += w * f(0.5 * (a + b));
                    } else {
                        if lo > a {
                            s += w * f(lo);
                        }
                        if hi < b {
                            s += w * f(hi);
                        }
                    }
                }
            }
            k += if odd_only { 2 } else { 1 };
        }
        s
    };
    let mut h = 0.5;
    let mut total = sum_at(h, false);
    let mut est = h * total;
    for _ in 0..10 {
        h *= 0.5;
        total += sum_at(h, true);
        let next = h * total;
        if (next - est).abs() <= 1e-14 * next.abs().max(1e-300) {
            return next;
        }
        est = next;
    }
    est
}

/// Tanh-sinh over consecutive breakpoints.
pub fn tanh_sinh_pieces(f: impl Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    breaks.windows(2).map(|w| tanh_sinh(&f, w[0], w[1])).sum()
}

/// `ln Γ(x)` for `x > 0`: shift to `x ≥ 20`, then the Stirling series.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 0.0;
    let mut y = x;
    while y < 20.0 {
        shift += y.ln();
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2
                        * (1.0 / 1260.0
                            + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0))))));
    (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series - shift
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// `K_{α,p}` evaluated term by term.
pub fn weak_constant(alpha: f64, p: f64) -> f64 {
    if p == 1.0 {
        2.0 / (alpha.powf(1.0 - alpha) * gamma(alpha))
    } else {
        2.0 * (p - 1.0).powf(alpha * (p - 1.0))
            / (alpha.powf(1.0 - p * alpha) * gamma(alpha) * (1.0 - alpha * p).powf(alpha * (p - 1.0)))
    }
}

/// Interpolation constant for endpoints `p1 < p < p2` with weak norms from
/// [`weak_constant`], following the formula chain step by step.
pub fn marcinkiewicz(alpha: f64, p: f64, p1: f64, p2: f64) -> f64 {
    let q1 = p1 / (1.0 - p1 * alpha);
    let q2 = p2 / (1.0 - p2 * alpha);
    let theta = p2 * (p - p1) / (p * (p2 - p1));
    let pt = 1.0 / ((1.0 - theta) / p1 + theta / p2);
    let qt = 1.0 / ((1.0 - theta) / q1 + theta / q2);
    let bracket = (p1 / pt).powf(q1 / p1) / (qt - q1) + (p2 / pt).powf(q2 / p2) / (q2 - qt);
    let k = 2.0 * qt.powf(1.0 / qt) * bracket.powf(1.0 / qt);
    k * weak_constant(alpha, p1).powf(1.0 - theta) * weak_constant(alpha, p2).powf(theta)
}

/// `J^α g(t)` by tanh-sinh on `[t0, t]`, split at `breaks`.
pub fn rl_integral(g: impl Fn(f64) -> f64, alpha: f64, t0: f64, t: f64, breaks: &[f64]) -> f64 {
    let mut pts = vec![t0];
    pts.extend(breaks.iter().copied().filter(|&b| b > t0 && b < t));
    let last = *pts.last().unwrap();
    let head = tanh_sinh_pieces(|s| (t - s).powf(alpha - 1.0) * g(s), &pts);
    // u = t - s on the last piece keeps the kernel singularity at an exact zero
    let tail = tanh_sinh(|u| u.powf(alpha - 1.0) * g(t - u), 0.0, t - last);
    (head + tail) / gamma(alpha)
}

/// Linear interpolant of `(nodes, values)`.
pub fn interp(nodes: &[f64], values: &[f64], t: f64) -> f64 {
    let j = match nodes.binary_search_by(|x| x.total_cmp(&t)) {
        Ok(j) => return values[j],
        Err(j) => j.clamp(1, nodes.len() - 1),
    };
    let w = (t - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
    values[j - 1] + w * (values[j] - values[j - 1])
}

/// `δ(t) = t^{β+1-α} ∫_t^1 (1-w)^{-β} w^{α-2} dw`.
pub fn delta(t: f64, alpha: f64, beta: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    // u = 1 - w on the upper half keeps the endpoint singularity at an exact zero
    let m = 0.5 * (1.0 + t);
    let lower = tanh_sinh(|w| (1.0 - w).powf(-beta) * w.powf(alpha - 2.0), t, m);
    let upper = tanh_sinh(|u| u.powf(-beta) * (1.0 - u).powf(alpha - 2.0), 0.0, 1.0 - m);
    t.powf(beta + 1.0 - alpha) * (lower + upper)
}

/// `|a - b| <= tol · |b|`.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs()
}

#[test]
fn oracle_self_checks() {
    assert!(rel_close(gamma(0.5), PI.sqrt(), 1e-14));
    assert!(rel_close(gamma(5.0), 24.0, 1e-14));
    assert!(rel_close(tanh_sinh(|x| x.powf(-0.5), 0.0, 1.0), 2.0, 1e-12));
    assert!(rel_close(tanh_sinh(|x| x.ln().abs(), 0.0, 1.0), 1.0, 1e-12));
}
