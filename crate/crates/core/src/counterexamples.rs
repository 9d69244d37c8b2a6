//! Explicit functions showing that the boundedness ranges of `J^α` are
//! sharp, and a probe that measures how fast their truncated image norms
//! blow up.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, FracError, Result};
use crate::fracint::image_profile;
use crate::funcspace::{critical_exponent_of, ClosedFormFunction, Interval, LpNorm, VectorNorm};
use crate::quad::{self, Tolerance};
use crate::report::{fmt9, sig9};
use crate::special::gamma_pos;

/// The eight counterexample families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseId {
    BoundedSuperFinite,
    BoundedSuperInf,
    HalflineSub,
    HalflineSuper,
    P1CriticalLog,
    P1HalflineLow,
    P1HalflineHigh,
    P1HalflineInf,
}

impl CaseId {
    pub const ALL: [CaseId; 8] = [
        CaseId::BoundedSuperFinite,
        CaseId::BoundedSuperInf,
        CaseId::HalflineSub,
        CaseId::HalflineSuper,
        CaseId::P1CriticalLog,
        CaseId::P1HalflineLow,
        CaseId::P1HalflineHigh,
        CaseId::P1HalflineInf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::BoundedSuperFinite => "bounded_super_finite",
            CaseId::BoundedSuperInf => "bounded_super_inf",
            CaseId::HalflineSub => "halfline_sub",
            CaseId::HalflineSuper => "halfline_super",
            CaseId::P1CriticalLog => "p1_critical_log",
            CaseId::P1HalflineLow => "p1_halfline_low",
            CaseId::P1HalflineHigh => "p1_halfline_high",
            CaseId::P1HalflineInf => "p1_halfline_inf",
        }
    }

    fn is_p1(self) -> bool {
        matches!(self, CaseId::P1CriticalLog | CaseId::P1HalflineLow | CaseId::P1HalflineHigh | CaseId::P1HalflineInf)
    }
}

impl std::str::FromStr for CaseId {
    type Err = FracError;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| FracError::Domain(format!("unknown counterexample case '{s}'")))
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of one counterexample. `eta` may be `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleSpec {
    pub case_id: CaseId,
    #[serde(with = "sig9")]
    pub p: f64,
    #[serde(with = "sig9")]
    pub alpha: f64,
    #[serde(with = "sig9")]
    pub eta: f64,
    /// Chosen exponent; `None` selects the midpoint of the admissible interval.
    #[serde(with = "sig9::opt")]
    pub beta_eta: Option<f64>,
    #[serde(with = "sig9")]
    pub t0: f64,
    #[serde(with = "sig9")]
    pub t1: f64,
    pub direction: Vec<f64>,
    pub norm: VectorNorm,
}

impl CounterexampleSpec {
    /// Scalar spec on `[0, 1]` with the default exponent.
    pub fn new(case_id: CaseId, p: f64, alpha: f64, eta: f64) -> Self {
        CounterexampleSpec {
            case_id,
            p,
            alpha,
            eta,
            beta_eta: None,
            t0: 0.0,
            t1: 1.0,
            direction: vec![1.0],
            norm: VectorNorm::Euclidean,
        }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta_eta = Some(beta);
        self
    }

    pub fn with_interval(mut self, t0: f64, t1: f64) -> Self {
        self.t0 = t0;
        self.t1 = t1;
        self
    }

    pub fn with_direction(mut self, direction: Vec<f64>, norm: VectorNorm) -> Self {
        self.direction = direction;
        self.norm = norm;
        self
    }

    /// Admissible open interval for the exponent.
    pub fn beta_interval(&self) -> Result<(f64, f64)> {
        beta_interval(self.case_id, self.p, self.alpha, self.eta)
    }

    /// The exponent actually used: the override if valid, else the midpoint.
    pub fn beta(&self) -> Result<f64> {
        let (lo, hi) = self.beta_interval()?;
        match self.beta_eta {
            None => Ok(0.5 * (lo + hi)),
            Some(b) if b <= lo => {
                domain(format!("beta_eta = {b} violates the lower bound: must exceed {lo} for {}", self.case_id))
            }
            Some(b) if b >= hi => {
                domain(format!("beta_eta = {b} violates the upper bound: must be below {hi} for {}", self.case_id))
            }
            Some(b) => Ok(b),
        }
    }
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Admissible open interval for the exponent of `case` at `(p, α, η)`.
pub fn beta_interval(case: CaseId, p: f64, alpha: f64, eta: f64) -> Result<(f64, f64)> {
    if eta.is_nan() || eta < 1.0 {
        return domain(format!("eta must lie in [1, ∞], got {eta}"));
    }
    if case.is_p1() {
        if p != 1.0 {
            return domain(format!("{case} requires p = 1, got {p}"));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return domain(format!("{case} requires alpha in (0, 1), got {alpha}"));
        }
    } else {
        if !(p > 1.0 && p.is_finite()) {
            return domain(format!("{case} requires p in (1, ∞), got {p}"));
        }
        if !(alpha > 0.0 && alpha * p < 1.0) {
            return domain(format!("{case} requires alpha in (0, 1/p), got {alpha}"));
        }
    }
    let crit = critical_exponent_of(p, alpha);
    let inv = if eta.is_infinite() { 0.0 } else { 1.0 / eta };
    let need = |ok: bool, what: &str| -> Result<()> {
        if ok {
            Ok(())
        } else {
            domain(format!("{case} requires {what}, got eta = {eta}"))
        }
    };
    match case {
        CaseId::BoundedSuperFinite => {
            need(eta.is_finite() && eta > crit && !same(eta, crit), &format!("finite eta > {crit}"))?;
            Ok((alpha + inv, 1.0 / p))
        }
        CaseId::BoundedSuperInf => {
            need(eta.is_infinite(), "eta = ∞")?;
            Ok((alpha, 1.0 / p))
        }
        CaseId::HalflineSub => {
            need(eta < crit && !same(eta, crit), &format!("eta in [1, {crit})"))?;
            Ok((1.0 / p, (alpha + inv).min(1.0)))
        }
        CaseId::HalflineSuper => {
            need(eta > crit && !same(eta, crit), &format!("eta > {crit}"))?;
            Ok((alpha + inv, 1.0 / p))
        }
        CaseId::P1CriticalLog => {
            need(same(eta, crit), &format!("eta = 1/(1-alpha) = {crit}"))?;
            Ok((1.0, 2.0 - alpha))
        }
        CaseId::P1HalflineLow => {
            need(eta < crit && !same(eta, crit), &format!("eta in [1, {crit})"))?;
            Ok((1.0, alpha + inv))
        }
        CaseId::P1HalflineHigh => {
            need(eta.is_finite() && (eta > crit || same(eta, crit)), &format!("finite eta >= {crit}"))?;
            Ok((1.0, 1.0 + inv))
        }
        CaseId::P1HalflineInf => {
            need(eta.is_infinite(), "eta = ∞")?;
            Ok((alpha, 1.0))
        }
    }
}

/// Builds the counterexample function of `spec`.
pub fn make_counterexample(spec: &CounterexampleSpec) -> Result<ClosedFormFunction> {
    let beta = spec.beta()?;
    let (t0, t1) = (spec.t0, spec.t1);
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return domain(format!("need finite t0 < t1, got [{t0}, {t1}]"));
    }
    let dir = spec.direction.clone();
    let power = |support: Interval| ClosedFormFunction::new(t0, support, 1.0, beta, 0.0, 1.0, dir.clone(), spec.norm);
    let log_family = || {
        let k = 2.0 * (t1 - t0);
        ClosedFormFunction::new(t0, Interval::new(t0, t1)?, k, 1.0, beta, k, dir.clone(), spec.norm)
    };
    match spec.case_id {
        CaseId::BoundedSuperFinite | CaseId::BoundedSuperInf | CaseId::P1HalflineInf => power(Interval::new(t0, t1)?),
        CaseId::HalflineSub | CaseId::P1HalflineLow => power(Interval::new(t0 + 1.0, f64::INFINITY)?),
        CaseId::HalflineSuper => power(Interval::new(t0, t0 + 1.0)?),
        CaseId::P1CriticalLog | CaseId::P1HalflineHigh => log_family(),
    }
}

/// `||f||_p` of the counterexample over its whole domain (finite by construction).
pub fn membership_norm(spec: &CounterexampleSpec) -> Result<f64> {
    LpNorm::lp_norm_on(&make_counterexample(spec)?, spec.p, None)
}

/// How the truncated norm is expected to grow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    /// `N(ε) ~ ε^{exponent}` with a negative exponent.
    Power,
    /// `N(ε) ~ (ln(κ/ε))^{log_exponent}`.
    Logarithmic,
    /// `N(r) ~ r^{-exponent}` over `[t0+1, t0+r]`, reported against `ε = 1/r`.
    HalfLine,
}

/// Measured truncated norms and the fitted growth rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub growth: Growth,
    #[serde(with = "sig9::vec")]
    pub eps: Vec<f64>,
    #[serde(with = "sig9::vec")]
    pub truncated_norm_power: Vec<f64>,
    #[serde(with = "sig9::vec")]
    pub local_slopes: Vec<f64>,
    #[serde(with = "sig9")]
    pub fitted_slope: f64,
    #[serde(with = "sig9")]
    pub theoretical_exponent: f64,
    #[serde(with = "sig9::opt")]
    pub log_exponent: Option<f64>,
    #[serde(with = "sig9::opt")]
    pub fitted_log_exponent: Option<f64>,
    #[serde(with = "sig9::opt_vec")]
    pub halfline_lower_bound: Option<Vec<f64>>,
    pub monotone: bool,
    pub plateau_free: bool,
}

impl DivergenceReport {
    /// Rows `eps, truncated_norm_power, log_eps, log_N, fitted_slope, theoretical_exponent`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["eps", "truncated_norm_power", "log_eps", "log_N", "fitted_slope", "theoretical_exponent"])?;
        for (e, n) in self.eps.iter().zip(&self.truncated_norm_power) {
            w.write_record([
                fmt9(*e),
                fmt9(*n),
                fmt9(e.ln()),
                fmt9(n.ln()),
                fmt9(self.fitted_slope),
                fmt9(self.theoretical_exponent),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Relative distance of the fitted slope from the theoretical exponent.
    pub fn slope_error(&self) -> f64 {
        ((self.fitted_slope - self.theoretical_exponent) / self.theoretical_exponent).abs()
    }
}

/// Default schedule: 16 points from `1e-4 L` down to `1e-12 L`.
pub fn default_eps_schedule(length: f64) -> Vec<f64> {
    (0..16).map(|i| length * 10f64.powf(-4.0 - 8.0 * i as f64 / 15.0)).collect()
}

/// Half-line schedule `ε = 1/r` for `r = 2, 4, ..., 64`.
pub fn halfline_eps_schedule() -> Vec<f64> {
    (1..=6).map(|k| 0.5f64.powi(k)).collect()
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `∫_a^b u^k du`.
fn power_integral(k: f64, a: f64, b: f64) -> f64 {
    if (k + 1.0).abs() < 1e-14 {
        (b / a).ln()
    } else {
        (b.powf(k + 1.0) - a.powf(k + 1.0)) / (k + 1.0)
    }
}

/// Truncated image norms of a counterexample: `N(ε) = ∫_{t0+ε}^{end} |J^α f|^η`
/// (the supremum when `η = ∞`) near a singularity at `t0`, or
/// `N(r) = ∫_{t0+1}^{t0+r} |J^α f|^η` with `ε = 1/r` when `f` lives on a
/// half-line. `eps_schedule` must decrease strictly; `None` picks the default.
///
/// Returns a regime error when the image norm does not diverge.
pub fn divergence_probe(
    f: &ClosedFormFunction,
    alpha: f64,
    eta: f64,
    eps_schedule: Option<&[f64]>,
) -> Result<DivergenceReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    if eta.is_nan() || eta < 1.0 {
        return domain(format!("eta must lie in [1, ∞], got {eta}"));
    }
    let s = f.support();
    let halfline = s.end.is_infinite();
    let eps: Vec<f64> = match eps_schedule {
        Some(e) => e.to_vec(),
        None if halfline => halfline_eps_schedule(),
        None => default_eps_schedule(s.end - f.t0()),
    };
    if eps.len() < 3 {
        return domain("eps schedule needs at least 3 points");
    }
    if eps.iter().any(|e| !(*e > 0.0)) || eps.windows(2).any(|w| w[1] >= w[0]) {
        return domain("eps schedule must be positive and strictly decreasing");
    }
    if halfline {
        halfline_probe(f, alpha, eta, eps)
    } else {
        bounded_probe(f, alpha, eta, eps)
    }
}

fn bounded_probe(f: &ClosedFormFunction, alpha: f64, eta: f64, eps: Vec<f64>) -> Result<DivergenceReport> {
    let t0 = f.t0();
    let s = f.support();
    if s.start != t0 {
        return Err(FracError::Regime("support does not touch t0: the image is bounded there".into()));
    }
    let len = s.end - t0;
    if eps[0] >= len {
        return domain(format!("eps must stay below the support length {len}"));
    }
    let (beta, gam) = (f.beta(), f.log_exponent());
    // Near t0 the image behaves like u^{a} (ln(κ/u))^{l}.
    let a = if gam > 0.0 && beta == 1.0 { alpha - 1.0 } else { alpha - beta };
    let l = if gam > 0.0 {
        if beta == 1.0 {
            1.0 - gam
        } else {
            -gam
        }
    } else {
        0.0
    };
    let pure_power = gam == 0.0 && beta < 1.0;
    let profile = |u: f64| image_profile(f, alpha, t0 + u).map(f64::abs);

    if eta.is_infinite() {
        if a >= 0.0 {
            return Err(FracError::Regime("image is bounded near t0: no divergence in L^∞".into()));
        }
        let values: Vec<f64> = if pure_power {
            let c = f.scale().abs() * gamma_pos(1.0 - beta) / gamma_pos(1.0 + alpha - beta);
            eps.iter().map(|e| c * e.powf(a)).collect()
        } else {
            let sup_from = |e: f64| -> Result<f64> {
                let (la, lb) = (e.ln(), len.ln());
                (0..=512)
                    .map(|i| profile((la + (lb - la) * i as f64 / 512.0).exp()))
                    .try_fold(0.0f64, |m, v| Ok(m.max(v?)))
            };
            eps.par_iter().map(|&e| sup_from(e)).collect::<Result<_>>()?
        };
        return Ok(assemble(Growth::Power, eps, values, a, None, None, |e| e.powf(a)));
    }

    let e_pow = a * eta + 1.0;
    let (growth, log_exp) = if e_pow < -1e-9 {
        (Growth::Power, None)
    } else if e_pow.abs() <= 1e-9 && 1.0 + l * eta > 0.0 {
        (Growth::Logarithmic, Some(1.0 + l * eta))
    } else {
        return Err(FracError::Regime(format!("image lies in L^{eta} near t0 (exponent {e_pow}); nothing diverges")));
    };

    let values: Vec<f64> = if pure_power {
        let c = f.scale().abs() * gamma_pos(1.0 - beta) / gamma_pos(1.0 + alpha - beta);
        eps.iter().map(|&e| c.powf(eta) * power_integral(a * eta, e, len)).collect()
    } else {
        // Piecewise in s = ln u, then accumulated from the outermost piece.
        let tol = Tolerance::rel(1e-10);
        let piece = |lo: f64, hi: f64| -> f64 {
            quad::integrate(
                |s: f64| {
                    let u = s.exp();
                    profile(u).map_or(f64::NAN, |v| v.powf(eta) * u)
                },
                lo.ln(),
                hi.ln(),
                tol,
            )
        };
        let mut bounds = vec![len];
        bounds.extend(&eps);
        let pieces: Vec<f64> = bounds.par_windows(2).map(|w| piece(w[1], w[0])).collect();
        if pieces.iter().any(|v| !v.is_finite()) {
            return Err(FracError::DivergentIntegral("image quadrature failed".into()));
        }
        pieces
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    };

    match growth {
        Growth::Logarithmic => {
            let e_log = log_exp.unwrap_or(1.0);
            let kappa = if gam > 0.0 { f.log_scale() } else { len };
            let loglog: Vec<f64> = eps.iter().map(|e| (kappa / e).ln().ln()).collect();
            let logn: Vec<f64> = values.iter().map(|v| v.ln()).collect();
            let fitted = least_squares_slope(&loglog, &logn);
            Ok(assemble(growth, eps, values, 0.0, log_exp, Some(fitted), move |e| (kappa / e).ln().powf(e_log)))
        }
        _ => Ok(assemble(growth, eps, values, e_pow, None, None, move |e| e.powf(e_pow))),
    }
}

fn halfline_probe(f: &ClosedFormFunction, alpha: f64, eta: f64, eps: Vec<f64>) -> Result<DivergenceReport> {
    if eta.is_infinite() {
        return Err(FracError::Regime("half-line probes need a finite eta".into()));
    }
    let t0 = f.t0();
    let start = f.support().start;
    if f.log_exponent() > 0.0 {
        return Err(FracError::UnsupportedClosedForm("half-line probes take pure powers".into()));
    }
    let beta = f.beta();
    let growth_exp = (alpha - beta) * eta + 1.0;
    if growth_exp <= 0.0 {
        return Err(FracError::Regime(format!("image tail is in L^{eta} (exponent {growth_exp}); nothing diverges")));
    }
    let rs: Vec<f64> = eps.iter().map(|e| 1.0 / e).collect();
    if rs[0] <= start - t0 {
        return domain("half-line schedule must satisfy 1/eps > start of support");
    }
    let tol = Tolerance::rel(1e-10);
    let mut bounds = vec![start - t0];
    bounds.extend(&rs);
    let pieces: Vec<f64> = bounds
        .par_windows(2)
        .map(|w| {
            quad::integrate(
                |u| image_profile(f, alpha, t0 + u).map_or(f64::NAN, |v| v.abs().powf(eta)),
                w[0],
                w[1],
                tol,
            )
        })
        .collect();
    if pieces.iter().any(|v| !v.is_finite()) {
        return Err(FracError::DivergentIntegral("image quadrature failed".into()));
    }
    let values: Vec<f64> = pieces
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    let g = gamma_pos(alpha + 1.0).powf(eta);
    let c = f.scale().abs().powf(eta);
    let lower: Vec<f64> = rs
        .iter()
        .map(|r| c * (r - 1.0).powf(alpha * eta + 1.0) * r.powf(-beta * eta) / ((alpha * eta + 1.0) * g))
        .collect();
    let e = -growth_exp;
    let mut report = assemble(Growth::HalfLine, eps, values, e, None, None, move |x| x.powf(e));
    report.halfline_lower_bound = Some(lower);
    Ok(report)
}

fn assemble(
    growth: Growth,
    eps: Vec<f64>,
    values: Vec<f64>,
    theoretical: f64,
    log_exponent: Option<f64>,
    fitted_log_exponent: Option<f64>,
    model: impl Fn(f64) -> f64,
) -> DivergenceReport {
    let le: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ln: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let local_slopes: Vec<f64> = (1..eps.len()).map(|i| (ln[i] - ln[i - 1]) / (le[i] - le[i - 1])).collect();
    let fitted_slope = least_squares_slope(&le, &ln);
    let monotone = values.windows(2).all(|w| w[1] > w[0]);
    let last = eps.len() - 1;
    let measured_ratio = (values[last] - values[last - 1]) / (values[1] - values[0]);
    let model_ratio = (model(eps[last]) - model(eps[last - 1])) / (model(eps[1]) - model(eps[0]));
    let plateau_free = monotone && measured_ratio >= 0.25 * model_ratio;
    DivergenceReport {
        growth,
        eps,
        truncated_norm_power: values,
        local_slopes,
        fitted_slope,
        theoretical_exponent: theoretical,
        log_exponent,
        fitted_log_exponent,
        halfline_lower_bound: None,
        monotone,
        plateau_free,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_beta_is_midpoint() {
        let spec = CounterexampleSpec::new(CaseId::BoundedSuperFinite, 2.0, 0.25, 8.0);
        assert_eq!(spec.beta_interval().unwrap(), (0.375, 0.5));
        assert!((spec.beta().unwrap() - 0.4375).abs() < 1e-15);
        let spec = CounterexampleSpec::new(CaseId::HalflineSub, 2.0, 0.25, 1.0);
        assert_eq!(spec.beta_interval().unwrap(), (0.5, 1.0));
    }

    #[test]
    fn bound_violations_name_the_bound() {
        let spec = CounterexampleSpec::new(CaseId::BoundedSuperFinite, 2.0, 0.25, 8.0).with_beta(0.3);
        let msg = spec.beta().unwrap_err().to_string();
        assert!(msg.contains("lower bound"), "{msg}");
        let spec = CounterexampleSpec::new(CaseId::P1CriticalLog, 1.0, 0.5, 2.0).with_beta(1.6);
        assert!(spec.beta().unwrap_err().to_string().contains("upper bound"));
        assert!(beta_interval(CaseId::BoundedSuperFinite, 2.0, 0.25, 3.0).is_err());
        assert!(beta_interval(CaseId::P1CriticalLog, 1.0, 0.5, 3.0).is_err());
    }

    #[test]
    fn case_names_round_trip() {
        for c in CaseId::ALL {
            assert_eq!(c.as_str().parse::<CaseId>().unwrap(), c);
        }
    }

    #[test]
    fn power_probe_slope() {
        let spec = CounterexampleSpec::new(CaseId::BoundedSuperFinite, 2.0, 0.25, 8.0);
        let f = make_counterexample(&spec).unwrap();
        let r = divergence_probe(&f, 0.25, 8.0, None).unwrap();
        assert!((r.theoretical_exponent + 0.5).abs() < 1e-12);
        assert!((r.fitted_slope + 0.5).abs() < 0.05, "{}", r.fitted_slope);
        assert!(r.monotone && r.plateau_free);
    }

    #[test]
    fn subcritical_probe_is_rejected() {
        let f = ClosedFormFunction::power(0.0, Interval::unit(), 1.0, 0.3).unwrap();
        assert!(matches!(divergence_probe(&f, 0.25, 2.0, None), Err(FracError::Regime(_))));
    }

    #[test]
    fn log_family_norm_and_probe() {
        let spec = CounterexampleSpec::new(CaseId::P1CriticalLog, 1.0, 0.5, 2.0);
        let b = spec.beta().unwrap();
        let expect = 2.0 * 2f64.ln().powf(1.0 - b) / (b - 1.0);
        let n = membership_norm(&spec).unwrap();
        assert!((n - expect).abs() < 1e-4 * expect, "{n} vs {expect}");
        let f = make_counterexample(&spec).unwrap();
        let r = divergence_probe(&f, 0.5, 2.0, None).unwrap();
        assert_eq!(r.growth, Growth::Logarithmic);
        assert!(r.monotone && r.plateau_free, "{r:?}");
    }

    #[test]
    fn halfline_probe_exceeds_lower_bound() {
        let spec = CounterexampleSpec::new(CaseId::HalflineSub, 2.0, 0.25, 1.0);
        let f = make_counterexample(&spec).unwrap();
        assert!(membership_norm(&spec).unwrap().is_finite());
        let r = divergence_probe(&f, 0.25, 1.0, None).unwrap();
        let lb = r.halfline_lower_bound.clone().unwrap();
        for (n, l) in r.truncated_norm_power.iter().zip(&lb) {
            assert!(n >= l);
        }
        assert!(r.monotone);
    }
}
