//! Riemann–Liouville fractional integral
//! `J^α f(t) = Γ(α)^{-1} ∫_{t0}^t (t-s)^{α-1} f(s) ds`.
//!
//! Grid data is integrated by product integration: the piecewise-linear
//! interpolant is integrated against the exact kernel, so the rule is exact
//! for piecewise-linear `f`. The closed-form family is mapped through its
//! incomplete-beta representation.

use rayon::prelude::*;
use rustfft::{num_complex::Complex, FftPlanner};

use crate::error::{domain, FracError, Result};
use crate::funcspace::{mesh, ClosedFormFunction, GridFunction, Interval};
use crate::quad::{self, Tolerance};
use crate::special::{gamma_pos, log_gamma};

const FAR_CELL_RATIO: f64 = 0.125;

/// `(∫_a^b u^{α-1} (u-a)/h du, ∫_a^b u^{α-1} (b-u)/h du)` with `h = b - a`:
/// the kernel moments of the two hat functions on a cell at distance
/// `a = t - t_{k+1}`, `b = t - t_k` from the evaluation point.
pub(crate) fn cell_weights(a: f64, b: f64, alpha: f64) -> (f64, f64) {
    let h = b - a;
    let rho = h / b;
    if rho > FAR_CELL_RATIO {
        let (ba, aa) = (b.powf(alpha), if a > 0.0 { a.powf(alpha) } else { 0.0 });
        let m0 = (ba - aa) / alpha;
        let m1 = (ba * b - aa * a) / (alpha + 1.0);
        ((m1 - a * m0) / h, (b * m0 - m1) / h)
    } else {
        // (1 - ρx)^{α-1} = Σ c_m ρ^m x^m, integrated against 1-x and x.
        let (mut c, mut pow) = (1.0, 1.0);
        let (mut left, mut right) = (0.0, 0.0);
        for m in 0..80 {
            let mf = m as f64;
            let term = c * pow;
            let dl = term / ((mf + 1.0) * (mf + 2.0));
            let dr = term / (mf + 2.0);
            left += dl;
            right += dr;
            if dr.abs() <= 1e-17 * right.abs() {
                break;
            }
            c *= (mf + 1.0 - alpha) / (mf + 1.0);
            pow *= rho;
        }
        let s = h * b.powf(alpha - 1.0);
        (s * left, s * right)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return domain(format!("order alpha must be positive, got {alpha}"));
    }
    Ok(())
}

/// Precomputed product-integration weights for one node set and order.
///
/// Row `n` holds the `n + 1` node weights of `J^α` at `t_n`, already divided
/// by `Γ(α)`; the base point is the first node.
#[derive(Debug, Clone)]
pub struct FracIntegralPlan {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl FracIntegralPlan {
    pub fn new(nodes: &[f64], alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if nodes.len() < 2 || nodes.windows(2).any(|w| w[1] <= w[0]) {
            return domain("plan needs at least 2 strictly increasing nodes");
        }
        let inv_gamma = 1.0 / gamma_pos(alpha);
        let rows: Vec<Vec<f64>> = (0..nodes.len())
            .into_par_iter()
            .map(|n| {
                let mut row = vec![0.0; n + 1];
                let tn = nodes[n];
                for k in 0..n {
                    let (l, r) = cell_weights(tn - nodes[k + 1], tn - nodes[k], alpha);
                    row[k] += l * inv_gamma;
                    row[k + 1] += r * inv_gamma;
                }
                row
            })
            .collect();
        Ok(FracIntegralPlan { alpha, nodes: nodes.to_vec(), weights: rows.concat() })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights of row `n` (`n + 1` entries).
    pub fn row(&self, n: usize) -> &[f64] {
        let start = n * (n + 1) / 2;
        &self.weights[start..start + n + 1]
    }

    /// `J^α f` at every node.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        if f.nodes() != self.nodes.as_slice() {
            return domain("grid function nodes differ from the plan's nodes");
        }
        let dim = f.dim();
        let vals = f.values();
        let out: Vec<f64> = (0..self.nodes.len())
            .into_par_iter()
            .flat_map_iter(|n| {
                let row = self.row(n);
                (0..dim).map(move |c| row.iter().enumerate().map(|(k, w)| w * vals[k * dim + c]).sum::<f64>())
            })
            .collect();
        f.with_values(out)
    }
}

/// `J^α f` on the nodes of `f`, based at the first node.
pub fn rl_integral_grid(f: &GridFunction, alpha: f64) -> Result<GridFunction> {
    FracIntegralPlan::new(f.nodes(), alpha)?.apply(f)
}

/// Same values as [`rl_integral_grid`] on a uniform mesh, computed as a
/// discrete convolution through the FFT in `O(N log N)`.
pub fn rl_integral_grid_fft(f: &GridFunction, alpha: f64) -> Result<GridFunction> {
    check_alpha(alpha)?;
    let nodes = f.nodes();
    if !mesh::is_uniform(nodes) {
        return domain("the convolution backend needs a uniform mesh");
    }
    let n = nodes.len();
    let h = (f.t1() - f.t0()) / (n - 1) as f64;
    let inv_gamma = 1.0 / gamma_pos(alpha);
    // (L(j), R(j)) for the cell j steps behind the target, j = 1..=n.
    let lr: Vec<(f64, f64)> = (1..=n).map(|j| cell_weights((j - 1) as f64 * h, j as f64 * h, alpha)).collect();
    let mut omega = vec![0.0; n];
    omega[0] = lr[0].1;
    for j in 1..n {
        omega[j] = lr[j - 1].0 + lr[j].1;
    }

    let size = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut kernel: Vec<Complex<f64>> =
        (0..size).map(|i| Complex::new(if i < n { omega[i] * inv_gamma } else { 0.0 }, 0.0)).collect();
    fwd.process(&mut kernel);

    let dim = f.dim();
    let mut out = vec![0.0; n * dim];
    for c in 0..dim {
        let comp = f.component(c);
        let mut buf: Vec<Complex<f64>> =
            (0..size).map(|i| Complex::new(if i < n { comp[i] } else { 0.0 }, 0.0)).collect();
        fwd.process(&mut buf);
        for (x, k) in buf.iter_mut().zip(&kernel) {
            *x *= k;
        }
        inv.process(&mut buf);
        let scale = 1.0 / size as f64;
        for m in 1..n {
            let correction = lr[m].1 * inv_gamma * comp[0];
            out[m * dim + c] = buf[m].re * scale - correction;
        }
    }
    f.with_values(out)
}

/// `J^α f(t)` at an arbitrary `t` in the grid domain, integrating the
/// interpolant up to `t` (the last cell is cut at `t`).
pub fn rl_integral_at(f: &GridFunction, alpha: f64, t: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if !(t >= f.t0() && t <= f.t1()) {
        return domain(format!("t = {t} is outside [{}, {}]", f.t0(), f.t1()));
    }
    let dim = f.dim();
    let mut acc = vec![0.0; dim];
    if t == f.t0() {
        return Ok(acc);
    }
    let nodes = f.nodes();
    let k = f.cell_of(t);
    for j in 0..k {
        let (l, r) = cell_weights(t - nodes[j + 1], t - nodes[j], alpha);
        let (vl, vr) = (f.value(j), f.value(j + 1));
        for c in 0..dim {
            acc[c] += l * vl[c] + r * vr[c];
        }
    }
    let tail = t - nodes[k];
    if tail > 0.0 {
        let (l, r) = cell_weights(0.0, tail, alpha);
        let vt = f.eval(t);
        let vk = f.value(k);
        for c in 0..dim {
            acc[c] += l * vk[c] + r * vt[c];
        }
    }
    let inv_gamma = 1.0 / gamma_pos(alpha);
    acc.iter_mut().for_each(|v| *v *= inv_gamma);
    Ok(acc)
}

/// Scalar image of the closed-form profile, exact for pure powers.
fn power_image(f: &ClosedFormFunction, alpha: f64, t: f64) -> Result<f64> {
    let (t0, s) = (f.t0(), f.support());
    if t <= s.start || t <= t0 || f.scale() == 0.0 {
        return Ok(0.0);
    }
    let beta = f.beta();
    if s.start == t0 && beta >= 1.0 {
        return Err(FracError::DivergentIntegral(format!("(t-t0)^(-{beta}) is not integrable at t0")));
    }
    let u = t - t0;
    let v0 = (s.start - t0) / u;
    let v1 = ((s.end.min(t)) - t0) / u;
    if v0 >= v1 {
        return Ok(0.0);
    }
    let lead = f.scale() * u.powf(alpha - beta);
    if v0 == 0.0 && v1 == 1.0 {
        let ratio = (log_gamma(1.0 - beta)? - log_gamma(1.0 + alpha - beta)?).exp();
        return Ok(lead * ratio);
    }
    let b = quad::beta_segment(1.0 - beta, alpha, v0, v1, Tolerance::rel(1e-13));
    Ok(lead * b / gamma_pos(alpha))
}

/// Exact image `J^α f(t)` of a pure power `c (t-t0)^{-β} x` on its support.
///
/// Supports starting at `t0` give `Γ(1-β)/Γ(1+α-β) (t-t0)^{α-β} c x`; other
/// supports reduce to an incomplete beta integral evaluated by adaptive
/// quadrature.
pub fn rl_integral_closed_form(f: &ClosedFormFunction, alpha: f64, t: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if f.log_exponent() > 0.0 {
        return Err(FracError::UnsupportedClosedForm(
            "logarithmic factor present; use the quadrature or grid route".into(),
        ));
    }
    let s = power_image(f, alpha, t)?;
    Ok(f.direction().iter().map(|x| s * x).collect())
}

/// Scalar image of the full power-log profile by quadrature.
///
/// With `s - t0 = (t - t0) e^{-w}` the integral becomes
/// `∫ (1-e^{-w})^{α-1} e^{(β-1)w} (w + ln(κ/(t-t0)))^{-γ} dw`, which is
/// smooth away from `w = 0` and has an explicit tail when `β = 1`.
fn power_log_image(f: &ClosedFormFunction, alpha: f64, t: f64) -> Result<f64> {
    let (t0, s) = (f.t0(), f.support());
    if t <= s.start || t <= t0 || f.scale() == 0.0 {
        return Ok(0.0);
    }
    let (beta, gam) = (f.beta(), f.log_exponent());
    let u = t - t0;
    let v0 = (s.start - t0) / u;
    let v1 = (s.end.min(t) - t0) / u;
    if v0 >= v1 {
        return Ok(0.0);
    }
    let lt = if gam > 0.0 { (f.log_scale() / u).ln() } else { 0.0 };
    let w_lo = -v1.ln();
    let w_hi = if v0 == 0.0 { f64::INFINITY } else { -v0.ln() };
    let g = move |w: f64| {
        let mut v = (-(-w).exp_m1()).powf(alpha - 1.0) * ((beta - 1.0) * w).exp();
        if gam > 0.0 {
            v *= (w + lt).powf(-gam);
        }
        v
    };
    let tol = Tolerance::rel(1e-12);
    let mut total = 0.0;

    let near_end = w_hi.min(1.0);
    if w_lo < near_end {
        total += if alpha < 1.0 {
            // w = y^{1/α} absorbs the (1-e^{-w})^{α-1} ~ w^{α-1} singularity.
            let inv = 1.0 / alpha;
            let y0 = w_lo.powf(alpha);
            let y1 = near_end.powf(alpha);
            quad::integrate(
                |y: f64| {
                    let w = y.powf(inv);
                    g(w) * inv * y.powf(inv - 1.0)
                },
                y0,
                y1,
                tol,
            )
        } else {
            quad::integrate(g, w_lo, near_end, tol)
        };
    }
    const W_TAIL: f64 = 50.0;
    let mid_lo = w_lo.max(1.0);
    let mid_hi = w_hi.min(W_TAIL);
    if mid_lo < mid_hi {
        total += quad::integrate(g, mid_lo, mid_hi, tol);
    }
    let tail_lo = w_lo.max(W_TAIL);
    if tail_lo < w_hi {
        if w_hi.is_finite() {
            total += quad::integrate(g, tail_lo, w_hi, tol);
        } else if beta > 1.0 || (beta == 1.0 && gam <= 1.0) {
            return Err(FracError::DivergentIntegral(format!(
                "power-log profile with beta={beta}, gamma={gam} is not integrable at t0"
            )));
        } else if beta == 1.0 {
            total += (tail_lo + lt).powf(1.0 - gam) / (gam - 1.0);
        } else {
            total += quad::integrate_to_infinity(g, tail_lo, tol);
        }
    }
    Ok(f.scale() * u.powf(alpha - beta) * total / gamma_pos(alpha))
}

/// `J^α f(t)` for any member of the power-log family, by quadrature of the
/// defining integral. Covers the logarithmic members that have no closed form.
pub fn rl_integral_quadrature(f: &ClosedFormFunction, alpha: f64, t: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let s = power_log_image(f, alpha, t)?;
    Ok(f.direction().iter().map(|x| s * x).collect())
}

/// Scalar profile of `J^α f` at `t`: closed form for pure powers, quadrature otherwise.
pub(crate) fn image_profile(f: &ClosedFormFunction, alpha: f64, t: f64) -> Result<f64> {
    if f.log_exponent() > 0.0 {
        power_log_image(f, alpha, t)
    } else {
        power_image(f, alpha, t)
    }
}

/// `J^α f` on `[t0, T]` for `f` supported in `[t0, ∞)`.
///
/// The kernel is causal, so the restriction to `[t0, T]` is exact. Nodes are
/// clustered at `t0`, at the support ends and at `T`; `tail_tol` sets their
/// density (about `tail_tol^{-1/2}` per segment). When the image is infinite
/// at `t0` that node is dropped.
pub fn rl_integral_halfline(f: &ClosedFormFunction, alpha: f64, t_end: f64, tail_tol: f64) -> Result<GridFunction> {
    check_alpha(alpha)?;
    let t0 = f.t0();
    if !(t_end > t0) {
        return domain(format!("T = {t_end} must exceed t0 = {t0}"));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return domain(format!("tail tolerance must lie in (0, 1), got {tail_tol}"));
    }
    let s = f.support();
    let mut breaks = vec![t0];
    for b in [s.start, s.end] {
        if b > t0 && b < t_end {
            breaks.push(b);
        }
    }
    breaks.push(t_end);
    breaks.dedup();
    let per = (tail_tol.powf(-0.5).ceil() as usize).clamp(16, 4096);
    let nodes = mesh::piecewise(&breaks, per, 3.0)?;
    let vals: Vec<f64> = nodes.par_iter().map(|&t| image_profile(f, alpha, t)).collect::<Result<_>>()?;
    let skip = usize::from(s.start == t0 && f.beta() >= alpha);
    let dir = f.direction();
    let values: Vec<f64> = vals[skip..].iter().flat_map(|v| dir.iter().map(move |x| v * x)).collect();
    GridFunction::new(nodes[skip..].to_vec(), values, dir.len(), f.vector_norm())
}

/// `J^{1+α} f(b) - J^{1+α} f(a) = ∫_a^b J^α f(s) ds`.
pub fn iterated_increment(f: &GridFunction, alpha: f64, a: f64, b: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if !(f.t0() < a && a < b && b < f.t1()) {
        return domain(format!("need t0 < a < b < t1, got a={a}, b={b} on [{}, {}]", f.t0(), f.t1()));
    }
    let jb = rl_integral_at(f, 1.0 + alpha, b)?;
    let ja = rl_integral_at(f, 1.0 + alpha, a)?;
    Ok(jb.iter().zip(&ja).map(|(x, y)| x - y).collect())
}

/// Interval helper for callers building half-line supports.
pub fn halfline_from(start: f64) -> Result<Interval> {
    Interval::new(start, f64::INFINITY)
}
