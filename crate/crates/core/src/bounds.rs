//! Constants of the boundedness theory for `J^α` and the checks of the
//! corresponding inequalities on grid functions.

use serde::Serialize;

use crate::error::{domain, FracError, Result};
use crate::fracint::FracIntegralPlan;
use crate::funcspace::{weak_lp_quasinorm, ExponentTriple, GridFunction, LpNorm, Regime};
use crate::report::sig9;
use crate::special::{gamma_pos, log_gamma};

pub use crate::report::{BoundContext, BoundReport, InequalityId};

/// Default side of the `(p1, p2)` search grid for [`strong_type_constant`].
pub const DEFAULT_SEARCH_GRID: usize = 32;

fn check_weak_regime(alpha: f64, p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return domain(format!("p must be finite and >= 1, got {p}"));
    }
    if !(alpha > 0.0 && alpha * p < 1.0) {
        return domain(format!("need 0 < alpha < 1/p, got alpha={alpha}, p={p}"));
    }
    Ok(())
}

/// Weak-type constant
/// `K_{α,p} = 2 (p-1)^{α(p-1)} / [α^{1-pα} Γ(α) (1-αp)^{α(p-1)}]`
/// (for `p = 1`: `2 / (α^{1-α} Γ(α))`), evaluated in the log domain.
pub fn weak_type_constant(alpha: f64, p: f64) -> Result<f64> {
    check_weak_regime(alpha, p)?;
    let mut ln_k = 2f64.ln() - (1.0 - p * alpha) * alpha.ln() - log_gamma(alpha)?;
    if p > 1.0 {
        ln_k += alpha * (p - 1.0) * ((p - 1.0).ln() - (1.0 - alpha * p).ln());
    }
    Ok(ln_k.exp())
}

/// Interpolation endpoints `1 < p1 < p < p2 < 1/α` and the derived exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationChoice {
    #[serde(with = "sig9")]
    pub alpha: f64,
    #[serde(with = "sig9")]
    pub p: f64,
    #[serde(with = "sig9")]
    pub p1: f64,
    #[serde(with = "sig9")]
    pub p2: f64,
    #[serde(with = "sig9")]
    pub q1: f64,
    #[serde(with = "sig9")]
    pub q2: f64,
    #[serde(with = "sig9")]
    pub theta: f64,
    #[serde(with = "sig9")]
    pub p_theta: f64,
    #[serde(with = "sig9")]
    pub q_theta: f64,
}

impl InterpolationChoice {
    pub fn new(alpha: f64, p: f64, p1: f64, p2: f64) -> Result<Self> {
        if !(alpha > 0.0 && 1.0 < p1 && p1 < p && p < p2 && p2 * alpha < 1.0) {
            return domain(format!("need 1 < p1 < p < p2 < 1/alpha, got p1={p1}, p={p}, p2={p2}, alpha={alpha}"));
        }
        let q1 = p1 / (1.0 - p1 * alpha);
        let q2 = p2 / (1.0 - p2 * alpha);
        let theta = p2 * (p - p1) / (p * (p2 - p1));
        let p_theta = 1.0 / ((1.0 - theta) / p1 + theta / p2);
        let q_theta = 1.0 / ((1.0 - theta) / q1 + theta / q2);
        let q_crit = p / (1.0 - p * alpha);
        if (p_theta - p).abs() > 1e-10 * p || (q_theta - q_crit).abs() > 1e-10 * q_crit {
            return domain("interpolation exponents are numerically degenerate");
        }
        if !(theta > 0.0 && theta < 1.0) {
            return domain(format!("theta = {theta} is outside (0, 1)"));
        }
        Ok(InterpolationChoice { alpha, p, p1, p2, q1, q2, theta, p_theta, q_theta })
    }
}

/// `M_θ = K norm1^{1-θ} norm2^θ` with
/// `K = 2 q_θ^{1/q_θ} [ (p1/p_θ)^{q1/p1} / (q_θ-q1) + (p2/p_θ)^{q2/p2} / (q2-q_θ) ]^{1/q_θ}`.
pub fn marcinkiewicz_constant(choice: &InterpolationChoice, norm1: f64, norm2: f64) -> Result<f64> {
    let c = choice;
    if !(c.q_theta > c.q1 && c.q2 > c.q_theta) {
        return domain(format!("need q1 < q_theta < q2, got {} < {} < {}", c.q1, c.q_theta, c.q2));
    }
    if !(norm1 > 0.0 && norm2 > 0.0) {
        return domain("operator norms must be positive");
    }
    let bracket = (c.p1 / c.p_theta).powf(c.q1 / c.p1) / (c.q_theta - c.q1)
        + (c.p2 / c.p_theta).powf(c.q2 / c.p2) / (c.q2 - c.q_theta);
    let k = 2.0 * c.q_theta.powf(1.0 / c.q_theta) * bracket.powf(1.0 / c.q_theta);
    Ok(k * norm1.powf(1.0 - c.theta) * norm2.powf(c.theta))
}

/// Working value of `C_{α,p}`: the smallest `M_θ` over the grid
/// `p1 = 1 + (p-1) i/n`, `p2 = p + (1/α - p) j/n`, `i, j = 1..n-1`, with the
/// weak-type constants as the endpoint norms.
///
/// Doubling `n` yields a superset of grid points, so refinement never
/// increases the result.
pub fn strong_type_constant(alpha: f64, p: f64, grid: usize) -> Result<(f64, InterpolationChoice)> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("strong-type constant needs p > 1, got {p}"));
    }
    check_weak_regime(alpha, p)?;
    if grid < 2 {
        return domain("search grid needs at least 2 divisions");
    }
    let n = grid as f64;
    let mut best: Option<(f64, InterpolationChoice)> = None;
    for i in 1..grid {
        let p1 = 1.0 + (p - 1.0) * i as f64 / n;
        let Ok(k1) = weak_type_constant(alpha, p1) else { continue };
        for j in 1..grid {
            let p2 = p + (1.0 / alpha - p) * j as f64 / n;
            let Ok(choice) = InterpolationChoice::new(alpha, p, p1, p2) else { continue };
            let Ok(k2) = weak_type_constant(alpha, p2) else { continue };
            let Ok(m) = marcinkiewicz_constant(&choice, k1, k2) else { continue };
            if m.is_finite() && best.is_none_or(|(b, _)| m < b) {
                best = Some((m, choice));
            }
        }
    }
    best.ok_or_else(|| {
        FracError::Domain(format!("no admissible interpolation pair for alpha={alpha}, p={p} (alpha too close to 1/p)"))
    })
}

/// `(t1-t0)^α / Γ(α+1)`, the constant of `J^α: L^p → L^p`.
pub fn into_itself_constant(alpha: f64, length: f64) -> f64 {
    length.powf(alpha) / gamma_pos(alpha + 1.0)
}

/// Discretization allowance: squared largest cell width times the largest
/// node magnitude.
fn grid_tolerance(f: &GridFunction) -> f64 {
    let h = f.max_cell_width();
    h * h * f.magnitudes().into_iter().fold(0.0, f64::max)
}

fn ctx(f: &GridFunction, p: f64, alpha: f64, q: f64) -> BoundContext {
    BoundContext { p, alpha: Some(alpha), q, t0: f.t0(), t1: f.t1() }
}

fn plan_for(f: &GridFunction, alpha: f64) -> Result<FracIntegralPlan> {
    FracIntegralPlan::new(f.nodes(), alpha)
}

/// `||J^α f||_p ≤ (t1-t0)^α / Γ(α+1) ||f||_p`.
pub fn verify_into_itself(f: &GridFunction, alpha: f64, p: f64) -> Result<BoundReport> {
    verify_into_itself_with(&plan_for(f, alpha)?, f, p)
}

/// [`verify_into_itself`] with a prebuilt plan.
pub fn verify_into_itself_with(plan: &FracIntegralPlan, f: &GridFunction, p: f64) -> Result<BoundReport> {
    let alpha = plan.alpha();
    let image = plan.apply(f)?;
    let lhs = image.lp_norm_on(p, None)?;
    let norm = f.lp_norm_on(p, None)?;
    let c = into_itself_constant(alpha, f.t1() - f.t0());
    Ok(BoundReport::new(InequalityId::IntoItself, lhs, c, norm, grid_tolerance(f), ctx(f, p, alpha, p)))
}

/// `[J^α f]_{L_w^{p/(1-pα)}} ≤ K_{α,p} ||f||_p`.
pub fn verify_weak_type(f: &GridFunction, alpha: f64, p: f64) -> Result<BoundReport> {
    check_weak_regime(alpha, p)?;
    verify_weak_type_with(&plan_for(f, alpha)?, f, p)
}

/// [`verify_weak_type`] with a prebuilt plan.
pub fn verify_weak_type_with(plan: &FracIntegralPlan, f: &GridFunction, p: f64) -> Result<BoundReport> {
    let alpha = plan.alpha();
    let k = weak_type_constant(alpha, p)?;
    let q = p / (1.0 - p * alpha);
    let image = plan.apply(f)?;
    let lhs = weak_lp_quasinorm(&image, q)?;
    let norm = f.lp_norm_on(p, None)?;
    Ok(BoundReport::new(InequalityId::WeakType, lhs, k, norm, grid_tolerance(f), ctx(f, p, alpha, q)))
}

/// Constant and inequality tag for `||J^α f||_q ≤ constant · ||f||_p` on an
/// interval of the given length.
pub fn strong_bound_constant(alpha: f64, p: f64, q: f64, length: f64) -> Result<(InequalityId, f64)> {
    let triple = ExponentTriple::new(p, alpha, q)?;
    if !q.is_finite() {
        return Err(FracError::Regime("q = ∞ is outside the bounded regimes; see the counterexample module".into()));
    }
    if p * alpha >= 1.0 {
        if q > p {
            return Err(FracError::Regime(format!("alpha >= 1/p: only targets q <= p are covered here (q = {q})")));
        }
        let c = into_itself_constant(alpha, length) * length.powf(1.0 / q - 1.0 / p);
        return Ok((InequalityId::StrongSubcritical, c));
    }
    match triple.classify() {
        Regime::Supercritical => Err(FracError::Regime(format!(
            "q = {q} exceeds the critical exponent {}; J^alpha is unbounded there \
             (use the counterexample module)",
            triple.critical_exponent()
        ))),
        Regime::Critical if p == 1.0 => {
            Err(FracError::Regime("p = 1 at the critical exponent 1/(1-alpha) is unbounded".into()))
        }
        Regime::Critical => Ok((InequalityId::StrongCritical, strong_type_constant(alpha, p, DEFAULT_SEARCH_GRID)?.0)),
        Regime::Subcritical if p == 1.0 => {
            let e = 1.0 - q * (1.0 - alpha);
            let c = weak_type_constant(alpha, 1.0)? * (length.powf(e) / e).powf(1.0 / q);
            Ok((InequalityId::StrongP1, c))
        }
        Regime::Subcritical => {
            let c = strong_type_constant(alpha, p, DEFAULT_SEARCH_GRID)?.0;
            Ok((InequalityId::StrongSubcritical, c * length.powf((p - q) / (p * q) + alpha)))
        }
    }
}

/// `||J^α f||_q ≤ constant · ||f||_p` with the constant of the applicable
/// regime; supercritical targets are rejected with a regime error.
pub fn verify_strong_type(f: &GridFunction, alpha: f64, p: f64, q: f64) -> Result<BoundReport> {
    strong_bound_constant(alpha, p, q, f.t1() - f.t0())?;
    verify_strong_type_with(&plan_for(f, alpha)?, f, p, q)
}

/// [`verify_strong_type`] with a prebuilt plan.
pub fn verify_strong_type_with(plan: &FracIntegralPlan, f: &GridFunction, p: f64, q: f64) -> Result<BoundReport> {
    let alpha = plan.alpha();
    let (id, c) = strong_bound_constant(alpha, p, q, f.t1() - f.t0())?;
    let image = plan.apply(f)?;
    let lhs = image.lp_norm_on(q, None)?;
    let norm = f.lp_norm_on(p, None)?;
    Ok(BoundReport::new(id, lhs, c, norm, grid_tolerance(f), ctx(f, p, alpha, q)))
}
