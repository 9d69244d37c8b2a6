//! Riemann–Liouville and Caputo derivatives of order `α ∈ (0, 1)`, the
//! fractional mean value theorem and the kernel-difference identity.

use serde::Serialize;

use crate::error::{domain, FracError, Result};
use crate::fracint::{rl_integral_at, FracIntegralPlan};
use crate::funcspace::GridFunction;
use crate::report::sig9;
use crate::special::{gamma_pos, tail_integral, DeltaProfileParams};

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("derivative order must lie in (0, 1), got {alpha}"));
    }
    Ok(())
}

/// Grid samples of a function together with samples of its derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothGridFunction {
    values: GridFunction,
    derivative: GridFunction,
}

impl SmoothGridFunction {
    pub fn new(values: GridFunction, derivative: GridFunction) -> Result<Self> {
        values.check_same_grid(&derivative)?;
        Ok(SmoothGridFunction { values, derivative })
    }

    /// Scalar function with an analytic derivative.
    pub fn from_fn(nodes: &[f64], f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(GridFunction::sample(nodes, f)?, GridFunction::sample(nodes, df)?)
    }

    /// Derivative estimated by second-order finite differences.
    pub fn from_samples(values: GridFunction) -> Result<Self> {
        let derivative = differentiate(&values)?;
        Ok(SmoothGridFunction { values, derivative })
    }

    pub fn values(&self) -> &GridFunction {
        &self.values
    }

    pub fn derivative(&self) -> &GridFunction {
        &self.derivative
    }
}

/// Three-point derivative on a non-uniform grid: centred in the interior,
/// one-sided at both ends.
pub fn differentiate(g: &GridFunction) -> Result<GridFunction> {
    let n = g.len();
    if n < 3 {
        return domain(format!("differentiation needs at least 3 nodes, got {n}"));
    }
    let t = g.nodes();
    let dim = g.dim();
    let mut out = vec![0.0; n * dim];
    for i in 0..n {
        let (j, w) = if i == 0 {
            let (h1, h2) = (t[1] - t[0], t[2] - t[1]);
            (0, [-(2.0 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2))])
        } else if i == n - 1 {
            let (h1, h2) = (t[n - 2] - t[n - 3], t[n - 1] - t[n - 2]);
            (n - 3, [h2 / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2), (h1 + 2.0 * h2) / (h2 * (h1 + h2))])
        } else {
            let (h1, h2) = (t[i] - t[i - 1], t[i + 1] - t[i]);
            (i - 1, [-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))])
        };
        for c in 0..dim {
            out[i * dim + c] = (0..3).map(|m| w[m] * g.value(j + m)[c]).sum();
        }
    }
    g.with_values(out)
}

/// `cD^α f = J^{1-α} f'`, from the supplied derivative samples.
pub fn caputo_derivative(f: &SmoothGridFunction, alpha: f64) -> Result<GridFunction> {
    check_order(alpha)?;
    FracIntegralPlan::new(f.derivative.nodes(), 1.0 - alpha)?.apply(&f.derivative)
}

/// `D^α f = d/dt J^{1-α} f`, differentiating the grid image.
pub fn rl_derivative(f: &GridFunction, alpha: f64) -> Result<GridFunction> {
    check_order(alpha)?;
    if f.len() < 3 {
        return domain(format!("differentiation needs at least 3 nodes, got {}", f.len()));
    }
    let integral = FracIntegralPlan::new(f.nodes(), 1.0 - alpha)?.apply(f)?;
    differentiate(&integral)
}

/// Root located by [`fractional_mvt_locate`] or [`kernel_difference_identity`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MvtResult {
    #[serde(with = "sig9")]
    pub xi: f64,
    #[serde(with = "sig9")]
    pub residual: f64,
    #[serde(with = "sig9")]
    pub lhs: f64,
    #[serde(with = "sig9")]
    pub rhs_at_xi: f64,
}

const BISECTIONS: usize = 64;

/// First sign change of `r` over the scan points, refined by bisection.
/// Returns `None` when no bracket exists.
fn first_root(points: &[f64], residuals: &[f64], r: impl Fn(f64) -> f64) -> Option<f64> {
    for i in 0..points.len() - 1 {
        let (ra, rb) = (residuals[i], residuals[i + 1]);
        if ra == 0.0 && i > 0 {
            return Some(points[i]);
        }
        if ra * rb < 0.0 {
            let (mut a, mut b, mut fa) = (points[i], points[i + 1], ra);
            for _ in 0..BISECTIONS {
                let m = 0.5 * (a + b);
                let fm = r(m);
                if fm == 0.0 {
                    return Some(m);
                }
                if fa * fm < 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            return Some(0.5 * (a + b));
        }
    }
    None
}

/// Finds `ξ ∈ (t0, t1)` with `(f(t1) - f(t0)) / (t1-t0)^α = cD^α f(ξ) / Γ(1+α)`.
///
/// The residual is scanned on the grid nodes; the smallest bracketed root
/// is refined by 64 bisection steps, with `cD^α f(ξ)` evaluated at arbitrary
/// `ξ` by cutting the last quadrature cell at `ξ`.
pub fn fractional_mvt_locate(f: &SmoothGridFunction, alpha: f64) -> Result<MvtResult> {
    check_order(alpha)?;
    let g = &f.values;
    if g.dim() != 1 {
        return domain("the mean value theorem is scalar: dimension must be 1");
    }
    let (t0, t1) = (g.t0(), g.t1());
    let n = g.len();
    let lhs = (g.value(n - 1)[0] - g.value(0)[0]) / (t1 - t0).powf(alpha);
    let g1a = gamma_pos(1.0 + alpha);
    let caputo = caputo_derivative(f, alpha)?;
    let residuals: Vec<f64> = (0..n).map(|i| lhs - caputo.value(i)[0] / g1a).collect();
    let r = |xi: f64| -> f64 {
        let v = rl_integral_at(&f.derivative, 1.0 - alpha, xi).map(|v| v[0]).unwrap_or(f64::NAN);
        lhs - v / g1a
    };
    if residuals.iter().all(|&x| x == 0.0) {
        let xi = 0.5 * (t0 + t1);
        let rhs = lhs - r(xi);
        return Ok(MvtResult { xi, residual: lhs - rhs, lhs, rhs_at_xi: rhs });
    }
    match first_root(g.nodes(), &residuals, r) {
        Some(xi) if xi > t0 && xi < t1 => {
            let res = r(xi);
            Ok(MvtResult { xi, residual: res, lhs, rhs_at_xi: lhs - res })
        }
        _ => Err(FracError::NotLocated {
            message: "no sign change of the mean-value residual on the grid".into(),
            min_residual: residuals.iter().fold(f64::INFINITY, |m, x| m.min(x.abs())),
        }),
    }
}

/// `c_{α,β} = (1-α) / (Γ(1+β) Γ(1-β))`.
pub fn kernel_identity_constant(alpha: f64, beta: f64) -> f64 {
    (1.0 - alpha) / (gamma_pos(1.0 + beta) * gamma_pos(1.0 - beta))
}

const IDENTITY_SCAN: usize = 1024;

/// Locates `ξ ∈ (0, l)` with
/// `|(l+x)^{α-1} - x^{α-1}| = l^β (ξ+x)^{α-β-1} c_{α,β} ∫_{x/(ξ+x)}^1 (1-w)^{-β} w^{α-2} dw`.
pub fn kernel_difference_identity(l: f64, x: f64, alpha: f64, beta: f64) -> Result<MvtResult> {
    if !(l > 0.0 && l.is_finite() && x > 0.0 && x.is_finite()) {
        return domain(format!("need l > 0 and x > 0, got l={l}, x={x}"));
    }
    let params = DeltaProfileParams::new(alpha, beta)?;
    let lhs = ((l + x).powf(alpha - 1.0) - x.powf(alpha - 1.0)).abs();
    let c = kernel_identity_constant(alpha, beta);
    let lb = l.powf(beta);
    let rhs = |xi: f64| {
        let w0 = x / (xi + x);
        lb * (xi + x).powf(alpha - beta - 1.0) * c * tail_integral(w0, params)
    };
    let r = |xi: f64| lhs - rhs(xi);
    let points: Vec<f64> = (0..=IDENTITY_SCAN).map(|i| l * i as f64 / IDENTITY_SCAN as f64).collect();
    let residuals: Vec<f64> = points.iter().map(|&xi| if xi == 0.0 { lhs } else { r(xi) }).collect();
    match first_root(&points, &residuals, r) {
        Some(xi) if xi > 0.0 && xi < l => {
            let res = r(xi);
            Ok(MvtResult { xi, residual: res, lhs, rhs_at_xi: lhs - res })
        }
        _ => Err(FracError::NotLocated {
            message: format!("kernel identity has no bracketed root for l={l}, x={x}"),
            min_residual: residuals.iter().fold(f64::INFINITY, |m, v| m.min(v.abs())),
        }),
    }
}
