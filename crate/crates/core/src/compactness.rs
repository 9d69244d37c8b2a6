//! Translation-modulus diagnostics for image families `J^α(F)`, the explicit
//! non-compact sequence at the critical exponent, and a numerical check of
//! the shifted Minkowski inequality.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::strong_type_constant;
use crate::error::{domain, FracError, Result};
use crate::fracderiv::kernel_identity_constant;
use crate::fracint::{iterated_increment, FracIntegralPlan};
use crate::funcspace::{
    mesh, signed_cell_power_integral, ExponentTriple, GridFunction, Interval, LpNorm, Regime, VectorNorm,
};
use crate::quad;
use crate::random::random_piecewise_linear;
use crate::report::{sig9, REL_TOL};
use crate::special::{delta_max, gamma_pos, DeltaProfileParams};

/// A bounded family of grid functions on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    members: Vec<GridFunction>,
    p: f64,
    family_norm: f64,
    seeds: Vec<u64>,
}

impl FamilySpec {
    pub fn new(members: Vec<GridFunction>, p: f64) -> Result<Self> {
        let Some(first) = members.first() else {
            return domain("a family needs at least one member");
        };
        if !(p.is_finite() && p >= 1.0) {
            return domain(format!("family exponent p must be finite and >= 1, got {p}"));
        }
        for m in &members[1..] {
            first.check_same_grid(m)?;
        }
        let norms: Vec<f64> = members.iter().map(|m| m.lp_norm_on(p, None)).collect::<Result<_>>()?;
        let family_norm = norms.into_iter().fold(0.0, f64::max);
        if !family_norm.is_finite() {
            return domain("family norm is not finite");
        }
        Ok(FamilySpec { members, p, family_norm, seeds: Vec::new() })
    }

    /// One seeded random piecewise-linear member per seed.
    pub fn random(seeds: &[u64], nodes: &[f64], dim: usize, norm: VectorNorm, p: f64) -> Result<Self> {
        let members =
            seeds.iter().map(|&s| random_piecewise_linear(s, nodes, dim, norm)).collect::<Result<Vec<_>>>()?;
        let mut fam = Self::new(members, p)?;
        fam.seeds = seeds.to_vec();
        Ok(fam)
    }

    pub fn members(&self) -> &[GridFunction] {
        &self.members
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn family_norm(&self) -> f64 {
        self.family_norm
    }

    pub fn seeds(&self) -> &[u64] {
        &self.seeds
    }

    fn t0(&self) -> f64 {
        self.members[0].t0()
    }

    fn t1(&self) -> f64 {
        self.members[0].t1()
    }
}

/// `∫_{t0}^{t1-h} ||f(t+h) - f(t)||^q dt` (the sup when `q = ∞`), exact for
/// the piecewise-linear interpolant in one dimension.
fn shifted_difference_power(f: &GridFunction, q: f64, h: f64) -> f64 {
    let (t0, t1) = (f.t0(), f.t1());
    let end = t1 - h;
    let mut pts: Vec<f64> = f.nodes().iter().flat_map(|&t| [t, t - h]).filter(|&t| t > t0 && t < end).collect();
    pts.push(t0);
    pts.push(end);
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let d = f.dim();
    let norm = f.norm();
    let (mut a_buf, mut b_buf) = (vec![0.0; d], vec![0.0; d]);
    let diff_at = |t: f64, out: &mut Vec<f64>, tmp: &mut Vec<f64>| {
        f.eval_into(t + h, out);
        f.eval_into(t, tmp);
        for (o, x) in out.iter_mut().zip(tmp.iter()) {
            *o -= x;
        }
    };
    let mut lo = vec![0.0; d];
    let mut hi = vec![0.0; d];
    diff_at(pts[0], &mut lo, &mut a_buf);
    let mut total = 0.0;
    let mut sup: f64 = norm.apply(&lo);
    for w in pts.windows(2) {
        diff_at(w[1], &mut hi, &mut b_buf);
        let len = w[1] - w[0];
        if q.is_infinite() {
            sup = sup.max(norm.apply(&hi));
        } else if d == 1 {
            total += signed_cell_power_integral(lo[0], hi[0], len, q);
        } else {
            total += quad::fixed(
                quad::gl16(),
                |s| {
                    let mix: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| a + s * (b - a)).collect();
                    norm.apply(&mix).powf(q)
                },
                0.0,
                1.0,
            ) * len;
        }
        std::mem::swap(&mut lo, &mut hi);
    }
    if q.is_infinite() {
        sup
    } else {
        total
    }
}

/// `sup_f (∫_{t0}^{t1-h} ||f(t+h) - f(t)||^q dt)^{1/q}` over the family, with
/// shifted values taken from the linear interpolant on the common grid.
pub fn translation_modulus(family: &FamilySpec, q: f64, h: f64) -> Result<f64> {
    modulus_of(&family.members, q, h)
}

fn modulus_of(members: &[GridFunction], q: f64, h: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return domain(format!("q must be >= 1, got {q}"));
    }
    let (t0, t1) = (members[0].t0(), members[0].t1());
    if !(h > 0.0 && h < 0.5 * (t1 - t0)) {
        return domain(format!("h = {h} must lie in (0, {})", 0.5 * (t1 - t0)));
    }
    let worst = members.par_iter().map(|f| shifted_difference_power(f, q, h)).reduce(|| 0.0, f64::max);
    Ok(if q.is_infinite() { worst } else { worst.powf(1.0 / q) })
}

/// Options of [`simon_diagnostic_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimonOptions {
    /// Integrability exponent of the `J_h` split; `None` takes the midpoint
    /// of `(1, min(p, 1/(1-α)))`.
    pub k: Option<f64>,
    /// Search grid for the strong-type constants.
    pub search_grid: usize,
}

impl Default for SimonOptions {
    fn default() -> Self {
        SimonOptions { k: None, search_grid: crate::bounds::DEFAULT_SEARCH_GRID }
    }
}

/// Result of [`simon_diagnostic`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusReport {
    #[serde(with = "sig9")]
    pub alpha: f64,
    #[serde(with = "sig9")]
    pub p: f64,
    #[serde(with = "sig9")]
    pub q: f64,
    #[serde(with = "sig9")]
    pub family_norm: f64,
    #[serde(with = "sig9::vec")]
    pub h_values: Vec<f64>,
    #[serde(with = "sig9::vec")]
    pub omega: Vec<f64>,
    /// Bound on the kernel-difference part, already divided by `Γ(α)`.
    #[serde(with = "sig9::opt_vec")]
    pub i_h: Option<Vec<f64>>,
    /// Bound on the near-diagonal part, already divided by `Γ(α)`.
    #[serde(with = "sig9::opt_vec")]
    pub j_h: Option<Vec<f64>>,
    #[serde(with = "sig9::opt")]
    pub beta_split: Option<f64>,
    #[serde(with = "sig9::opt")]
    pub k: Option<f64>,
    #[serde(with = "sig9::opt")]
    pub theta: Option<f64>,
    /// Target exponent used for the envelope (differs from `q` when `q <= p`).
    #[serde(with = "sig9::opt")]
    pub envelope_q: Option<f64>,
    #[serde(with = "sig9")]
    pub holder_factor: f64,
    #[serde(with = "sig9")]
    pub increment_sup: f64,
    #[serde(with = "sig9")]
    pub increment_bound: f64,
    pub decays: bool,
    pub within_envelope: bool,
    pub decay_verdict: bool,
    pub seeds: Vec<u64>,
}

impl ModulusReport {
    /// `i_h + j_h` per `h`.
    pub fn envelope(&self) -> Option<Vec<f64>> {
        let (i, j) = (self.i_h.as_ref()?, self.j_h.as_ref()?);
        Some(i.iter().zip(j).map(|(a, b)| a + b).collect())
    }
}

/// `h = (t1-t0)/8 · 2^{-i}`, `i = 0..7`.
pub fn default_h_schedule(length: f64) -> Vec<f64> {
    (0..8).map(|i| length / 8.0 * 0.5f64.powi(i)).collect()
}

/// [`simon_diagnostic_with`] with default options.
pub fn simon_diagnostic(family: &FamilySpec, alpha: f64, q: f64, h_schedule: Option<&[f64]>) -> Result<ModulusReport> {
    simon_diagnostic_with(family, alpha, q, h_schedule, SimonOptions::default())
}

struct Envelope {
    beta: f64,
    k: f64,
    theta: f64,
    q_eff: f64,
    holder: f64,
    i_coef: f64,
    j_coef: f64,
    j_power: f64,
}

fn envelope(family: &FamilySpec, alpha: f64, q: f64, opts: SimonOptions) -> Result<Option<Envelope>> {
    let p = family.p;
    if p == 1.0 || p * alpha >= 1.0 || q.is_infinite() {
        return Ok(None);
    }
    let len = family.t1() - family.t0();
    let crit = p / (1.0 - p * alpha);
    let (q_eff, holder) = if q > p {
        (q, 1.0)
    } else {
        let qq = 0.5 * (p + crit);
        (qq, len.powf(1.0 / q - 1.0 / qq))
    };
    let norm = family.family_norm;
    let ga = gamma_pos(alpha);

    let beta = alpha - (q_eff - p) / (q_eff * p);
    let order = alpha - beta;
    let c = kernel_identity_constant(alpha, beta);
    let m = delta_max(DeltaProfileParams::new(alpha, beta)?);
    let c_low = strong_type_constant(order, p, opts.search_grid)?.0;
    let i_coef = c * m * gamma_pos(order) * c_low * norm / ga * holder;

    let k_hi = p.min(1.0 / (1.0 - alpha));
    let k = opts.k.unwrap_or(0.5 * (1.0 + k_hi));
    if !(k > 1.0 && k < k_hi) {
        return domain(format!("k = {k} must lie in (1, {k_hi})"));
    }
    let theta = (p / q_eff) * (q_eff - k) / (p - k * (1.0 - p * alpha));
    if !(theta > 0.0 && theta < 1.0) {
        return domain(format!("theta = {theta} is outside (0, 1)"));
    }
    let c_alpha = strong_type_constant(alpha, p, opts.search_grid)?.0;
    let e = k * (alpha - 1.0) + 1.0;
    let base = len.powf(1.0 - 1.0 / p) / e.powf(1.0 / k);
    let j_coef = base.powf(1.0 - theta) * (ga * c_alpha).powf(theta) * norm / ga * holder;
    let j_power = (alpha - 1.0 + 1.0 / k) * (1.0 - theta);
    Ok(Some(Envelope { beta, k, theta, q_eff, holder, i_coef, j_coef, j_power }))
}

/// Sampled `(a, b)` pairs, as fractions of the interval, for the increment set.
const INCREMENT_PAIRS: [(f64, f64); 5] = [(0.1, 0.9), (0.25, 0.75), (0.4, 0.6), (0.05, 0.5), (0.5, 0.95)];

/// Translation modulus of the image family `{J^α f : f ∈ F}` over an
/// `h` sweep, against the two-part envelope of the compactness argument.
///
/// The envelope needs `1 < p` and `α < 1/p`; otherwise it is omitted and the
/// verdict rests on decay alone. For `q <= p` the envelope is computed at an
/// intermediate exponent and transferred with Hölder's inequality.
pub fn simon_diagnostic_with(
    family: &FamilySpec,
    alpha: f64,
    q: f64,
    h_schedule: Option<&[f64]>,
    opts: SimonOptions,
) -> Result<ModulusReport> {
    let p = family.p;
    let triple = ExponentTriple::new(p, alpha, q)?;
    if triple.classify() != Regime::Subcritical {
        return Err(FracError::Regime(format!(
            "q = {q} is not below the critical exponent {}; the image family need not be compact",
            triple.critical_exponent()
        )));
    }
    let (t0, t1) = (family.t0(), family.t1());
    let len = t1 - t0;
    let hs: Vec<f64> = match h_schedule {
        Some(h) => h.to_vec(),
        None => default_h_schedule(len),
    };
    if hs.len() < 2 || hs.windows(2).any(|w| w[1] >= w[0]) {
        return domain("h schedule must have at least 2 strictly decreasing values");
    }

    let plan = FracIntegralPlan::new(family.members[0].nodes(), alpha)?;
    let images: Vec<GridFunction> = family.members.par_iter().map(|f| plan.apply(f)).collect::<Result<_>>()?;
    let omega: Vec<f64> = hs.iter().map(|&h| modulus_of(&images, q, h)).collect::<Result<_>>()?;

    let env = envelope(family, alpha, q, opts)?;
    let (i_h, j_h) = match &env {
        Some(e) => (
            Some(hs.iter().map(|h| e.i_coef * h.powf(e.beta)).collect::<Vec<_>>()),
            Some(hs.iter().map(|h| e.j_coef * h.powf(e.j_power)).collect::<Vec<_>>()),
        ),
        None => (None, None),
    };

    let increments: Vec<f64> = family
        .members
        .par_iter()
        .map(|f| -> Result<f64> {
            let mut worst: f64 = 0.0;
            for (fa, fb) in INCREMENT_PAIRS {
                let v = iterated_increment(f, alpha, t0 + fa * len, t0 + fb * len)?;
                worst = worst.max(f.norm().apply(&v));
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let increment_sup = increments.into_iter().fold(0.0, f64::max);
    let increment_bound = 2.0
        * ((p - 1.0) / ((alpha + 1.0) * p - 1.0)).powf((p - 1.0) / p)
        * len.powf(alpha + 1.0 - 1.0 / p)
        * family.family_norm
        / gamma_pos(1.0 + alpha);

    let (first, last) = (omega[0], omega[omega.len() - 1]);
    let decays = first == 0.0 || last < first / 10.0;
    let mut report = ModulusReport {
        alpha,
        p,
        q,
        family_norm: family.family_norm,
        h_values: hs,
        omega,
        i_h,
        j_h,
        beta_split: env.as_ref().map(|e| e.beta),
        k: env.as_ref().map(|e| e.k),
        theta: env.as_ref().map(|e| e.theta),
        envelope_q: env.as_ref().map(|e| e.q_eff),
        holder_factor: env.as_ref().map_or(1.0, |e| e.holder),
        increment_sup,
        increment_bound,
        decays,
        within_envelope: true,
        decay_verdict: false,
        seeds: family.seeds.clone(),
    };
    if let Some(envelope) = report.envelope() {
        report.within_envelope = report.omega.iter().zip(&envelope).all(|(w, e)| *w <= e * (1.0 + REL_TOL));
    }
    report.decay_verdict = report.decays && report.within_envelope;
    Ok(report)
}

/// Relative width of the jump ramp in [`noncompact_sequence`].
const JUMP_WIDTH: f64 = 1e-12;
/// Nodes per smooth segment of the non-compact meshes.
pub const NONCOMPACT_SEGMENT: usize = 512;
const NONCOMPACT_GRADING: f64 = 3.0;

fn check_unit(v: &[f64], norm: VectorNorm) -> Result<()> {
    if v.is_empty() || (norm.apply(v) - 1.0).abs() > 1e-12 {
        return domain("v must be a unit vector in the chosen norm");
    }
    Ok(())
}

fn jump_mesh(t0: f64, t1: f64, jumps: &[f64]) -> Result<Vec<f64>> {
    let delta = JUMP_WIDTH * (t1 - t0);
    let mut nodes = vec![t0];
    let mut start = t0;
    for &b in jumps {
        if b >= t1 {
            break;
        }
        let seg = mesh::two_sided(start, b, NONCOMPACT_SEGMENT, NONCOMPACT_GRADING)?;
        nodes.extend(seg.into_iter().skip(1));
        start = b + delta;
        nodes.push(start);
    }
    let seg = mesh::two_sided(start, t1, NONCOMPACT_SEGMENT, NONCOMPACT_GRADING)?;
    nodes.extend(seg.into_iter().skip(1));
    nodes.dedup();
    Ok(nodes)
}

fn step_on(nodes: &[f64], height: f64, b: f64, v: &[f64], norm: VectorNorm) -> Result<GridFunction> {
    GridFunction::sample_along(nodes, v, norm, |t| if t <= b { height } else { 0.0 })
}

/// `f_j = j^{1/p} v` on `[t0, t0 + (t1-t0)/j]` and `0` after, on a mesh with
/// a node pair straddling the jump.
pub fn noncompact_sequence(j: u32, p: f64, interval: Interval, v: &[f64], norm: VectorNorm) -> Result<GridFunction> {
    if j == 0 {
        return domain("j must be >= 1");
    }
    if !(p.is_finite() && p >= 1.0) {
        return domain(format!("p must be finite and >= 1, got {p}"));
    }
    if !interval.is_bounded() {
        return domain("interval must be bounded");
    }
    check_unit(v, norm)?;
    let (t0, t1) = (interval.start, interval.end);
    let b = t0 + (t1 - t0) / j as f64;
    let nodes = jump_mesh(t0, t1, &[b])?;
    step_on(&nodes, (j as f64).powf(1.0 / p), b, v, norm)
}

/// Measured critical-norm separation of two members of the non-compact sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapReport {
    pub n: u32,
    pub m: u32,
    #[serde(with = "sig9")]
    pub alpha: f64,
    #[serde(with = "sig9")]
    pub p: f64,
    #[serde(with = "sig9")]
    pub critical_q: f64,
    #[serde(with = "sig9")]
    pub bound: f64,
    #[serde(with = "sig9")]
    pub measured: f64,
    /// `||f_n||_p`, equal to `(t1-t0)^{1/p}` for a unit `v`.
    #[serde(with = "sig9")]
    pub sequence_norm: f64,
}

impl GapReport {
    pub fn ratio(&self) -> f64 {
        self.measured / self.bound
    }
}

/// `[1 - (m/n)^{1/p}] (t1-t0)^{1/p} / Γ(α+1)` against the measured
/// `||J^α f_n - J^α f_m||_{p/(1-pα)}`.
pub fn noncompact_gap(n: u32, m: u32, alpha: f64, p: f64, interval: Interval) -> Result<GapReport> {
    noncompact_gap_along(n, m, alpha, p, interval, &[1.0], VectorNorm::Euclidean)
}

/// [`noncompact_gap`] for a general unit direction `v`.
pub fn noncompact_gap_along(
    n: u32,
    m: u32,
    alpha: f64,
    p: f64,
    interval: Interval,
    v: &[f64],
    norm: VectorNorm,
) -> Result<GapReport> {
    if !(m >= 1 && n > m) {
        return domain(format!("need n > m >= 1, got n={n}, m={m}"));
    }
    if !(p.is_finite() && p >= 1.0 && alpha > 0.0 && alpha * p < 1.0) {
        return domain(format!("need p >= 1 and 0 < alpha < 1/p, got p={p}, alpha={alpha}"));
    }
    if !interval.is_bounded() {
        return domain("interval must be bounded");
    }
    check_unit(v, norm)?;
    let (t0, t1) = (interval.start, interval.end);
    let len = t1 - t0;
    let bn = t0 + len / n as f64;
    let bm = t0 + len / m as f64;
    let nodes = jump_mesh(t0, t1, &[bn, bm])?;
    let fnn = step_on(&nodes, (n as f64).powf(1.0 / p), bn, v, norm)?;
    let fm = step_on(&nodes, (m as f64).powf(1.0 / p), bm, v, norm)?;
    let diff = fnn.combine(1.0, &fm, -1.0)?;
    let image = FracIntegralPlan::new(&nodes, alpha)?.apply(&diff)?;
    let crit = p / (1.0 - p * alpha);
    Ok(GapReport {
        n,
        m,
        alpha,
        p,
        critical_q: crit,
        bound: (1.0 - (m as f64 / n as f64).powf(1.0 / p)) * len.powf(1.0 / p) / gamma_pos(alpha + 1.0),
        measured: image.lp_norm_on(crit, None)?,
        sequence_norm: fnn.lp_norm_on(p, None)?,
    })
}

/// Samples `f(t, s)` on a product grid, read by bilinear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateGrid {
    t: Vec<f64>,
    s: Vec<f64>,
    values: Vec<f64>,
}

impl BivariateGrid {
    /// `values[i * s.len() + j] = f(t[i], s[j])`.
    pub fn new(t: Vec<f64>, s: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        for (name, nodes) in [("t", &t), ("s", &s)] {
            if nodes.len() < 2 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
                return domain(format!("{name} nodes must be strictly increasing (at least 2)"));
            }
        }
        if t[0] != s[0] || t[t.len() - 1] != s[s.len() - 1] {
            return domain("t and s grids must span the same interval");
        }
        if values.len() != t.len() * s.len() || values.iter().any(|v| !v.is_finite()) {
            return domain("values must be finite with one entry per grid point");
        }
        Ok(BivariateGrid { t, s, values })
    }

    pub fn from_fn(t: Vec<f64>, s: Vec<f64>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = t.iter().flat_map(|&a| s.iter().map(move |&b| (a, b))).map(|(a, b)| f(a, b)).collect();
        Self::new(t, s, values)
    }

    /// Uniform `U(-1, 1)` samples from a seeded generator.
    pub fn random(seed: u64, t: Vec<f64>, s: Vec<f64>) -> Result<Self> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let values = (0..t.len() * s.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Self::new(t, s, values)
    }

    fn locate(nodes: &[f64], x: f64) -> (usize, f64) {
        let i = nodes.partition_point(|&v| v <= x).clamp(1, nodes.len() - 1) - 1;
        let w = ((x - nodes[i]) / (nodes[i + 1] - nodes[i])).clamp(0.0, 1.0);
        (i, w)
    }

    /// `f(t, ·)` at the `s` nodes.
    fn row_at(&self, t: f64) -> Vec<f64> {
        let ns = self.s.len();
        let (i, w) = Self::locate(&self.t, t);
        (0..ns).map(|j| (1.0 - w) * self.values[i * ns + j] + w * self.values[(i + 1) * ns + j]).collect()
    }

    /// `f(·, s)` at the `t` nodes.
    fn column_at(&self, s: f64) -> Vec<f64> {
        let ns = self.s.len();
        let (j, w) = Self::locate(&self.s, s);
        (0..self.t.len()).map(|i| (1.0 - w) * self.values[i * ns + j] + w * self.values[i * ns + j + 1]).collect()
    }

    pub fn eval(&self, t: f64, s: f64) -> f64 {
        let (j, w) = Self::locate(&self.s, s);
        let row = self.row_at(t);
        (1.0 - w) * row[j] + w * row[j + 1]
    }
}

/// Linear interpolant of `(nodes, vals)` at `x`.
fn interp(nodes: &[f64], vals: &[f64], x: f64) -> f64 {
    let (i, w) = BivariateGrid::locate(nodes, x);
    (1.0 - w) * vals[i] + w * vals[i + 1]
}

/// Breakpoints of a piecewise-linear function restricted to `[a, b]`.
fn pieces(nodes: &[f64], a: f64, b: f64) -> Vec<f64> {
    let mut pts = vec![a];
    pts.extend(nodes.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts
}

/// `∫_a^b` of the linear interpolant.
fn pl_integral(nodes: &[f64], vals: &[f64], a: f64, b: f64) -> f64 {
    pieces(nodes, a, b)
        .windows(2)
        .map(|w| 0.5 * (w[1] - w[0]) * (interp(nodes, vals, w[0]) + interp(nodes, vals, w[1])))
        .sum()
}

/// `∫_a^b |·|^p` of the linear interpolant.
fn pl_power_integral(nodes: &[f64], vals: &[f64], a: f64, b: f64, p: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    pieces(nodes, a, b)
        .windows(2)
        .map(|w| signed_cell_power_integral(interp(nodes, vals, w[0]), interp(nodes, vals, w[1]), w[1] - w[0], p))
        .sum()
}

/// Composite 16-point Gauss–Legendre over the sorted, deduplicated panel points.
fn panel_quadrature(mut pts: Vec<f64>, a: f64, b: f64, g: impl Fn(f64) -> f64 + Sync) -> f64 {
    pts.retain(|&x| x > a && x < b);
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let parts: Vec<f64> = pts.par_windows(2).map(|w| quad::fixed(quad::gl16(), &g, w[0], w[1])).collect();
    parts.iter().sum()
}

/// Both sides of the shifted Minkowski inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinkowskiReport {
    #[serde(with = "sig9")]
    pub h: f64,
    #[serde(with = "sig9")]
    pub p: f64,
    #[serde(with = "sig9")]
    pub lhs: f64,
    pub terms: [f64; 3],
    #[serde(with = "sig9")]
    pub rhs: f64,
    pub holds: bool,
}

/// `(∫_{t0}^{t1-h} |∫_t^{t+h} f(t,s) ds|^p dt)^{1/p}` against the three-term
/// split over `s ∈ [t0, t0+h]`, `[t0+h, t1-h]`, `[t1-h, t1]`.
pub fn minkowski_shift_check(f: &BivariateGrid, p: f64, h: f64) -> Result<MinkowskiReport> {
    if !(p.is_finite() && p >= 1.0) {
        return domain(format!("p must be finite and >= 1, got {p}"));
    }
    let (t0, t1) = (f.t[0], f.t[f.t.len() - 1]);
    if !(h > 0.0 && h < 0.5 * (t1 - t0)) {
        return domain(format!("h = {h} must lie in (0, {})", 0.5 * (t1 - t0)));
    }

    let mut lhs_pts: Vec<f64> = f.t.clone();
    lhs_pts.extend(f.s.iter().flat_map(|&x| [x, x - h]));
    let lhs = panel_quadrature(lhs_pts, t0, t1 - h, |t| pl_integral(&f.s, &f.row_at(t), t, t + h).abs().powf(p))
        .powf(1.0 / p);

    let mut rhs_pts: Vec<f64> = f.s.clone();
    rhs_pts.extend(f.t.iter().flat_map(|&x| [x, x + h]));
    rhs_pts.extend([t0 + h, t1 - h]);
    let inner = |a: f64, b: f64, s: f64| pl_power_integral(&f.t, &f.column_at(s), a, b, p).powf(1.0 / p);
    let terms = [
        panel_quadrature(rhs_pts.clone(), t0, t0 + h, |s| inner(t0, s, s)),
        panel_quadrature(rhs_pts.clone(), t0 + h, t1 - h, |s| inner(s - h, s, s)),
        panel_quadrature(rhs_pts, t1 - h, t1, |s| inner(s - h, t1 - h, s)),
    ];
    let rhs: f64 = terms.iter().sum();
    Ok(MinkowskiReport { h, p, lhs, terms, rhs, holds: lhs <= rhs * (1.0 + REL_TOL) + 1e-14 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_mesh(n: usize) -> Vec<f64> {
        mesh::uniform(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn modulus_of_identity() {
        let fam = FamilySpec::new(vec![GridFunction::sample(&unit_mesh(65), |t| t).unwrap()], 2.0).unwrap();
        let w = translation_modulus(&fam, 2.0, 0.1).unwrap();
        assert!((w - 0.1 * 0.9f64.sqrt()).abs() < 1e-12);
        assert!(translation_modulus(&fam, 2.0, 0.6).is_err());
    }

    #[test]
    fn constants_have_zero_modulus() {
        let fam = FamilySpec::new(vec![GridFunction::sample(&unit_mesh(17), |_| 3.0).unwrap()], 1.0).unwrap();
        for h in [0.01, 0.1, 0.4] {
            assert_eq!(translation_modulus(&fam, 3.0, h).unwrap(), 0.0);
        }
    }

    #[test]
    fn zero_family_verdict() {
        let fam = FamilySpec::new(vec![GridFunction::sample(&unit_mesh(129), |_| 0.0).unwrap()], 2.0).unwrap();
        let r = simon_diagnostic(&fam, 0.25, 3.0, None).unwrap();
        assert!(r.omega.iter().all(|&w| w == 0.0));
        assert!(r.decay_verdict);
        assert!((r.beta_split.unwrap() - (0.25 - 1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn critical_target_is_a_regime_error() {
        let fam = FamilySpec::new(vec![GridFunction::sample(&unit_mesh(17), |t| t).unwrap()], 2.0).unwrap();
        assert!(matches!(simon_diagnostic(&fam, 0.25, 4.0, None), Err(FracError::Regime(_))));
        assert!(matches!(simon_diagnostic(&fam, 0.25, 5.0, None), Err(FracError::Regime(_))));
    }

    #[test]
    fn sequence_shape() {
        let f = noncompact_sequence(4, 2.0, Interval::unit(), &[1.0], VectorNorm::Euclidean).unwrap();
        assert_eq!(f.eval(0.1)[0], 2.0);
        assert_eq!(f.eval(0.25)[0], 2.0);
        assert_eq!(f.eval(0.3)[0], 0.0);
        assert!((f.lp_norm_on(2.0, None).unwrap() - 1.0).abs() < 1e-9);
        let g = noncompact_sequence(1, 2.0, Interval::unit(), &[1.0], VectorNorm::Euclidean).unwrap();
        assert!(g.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn gap_bound_values() {
        let r = noncompact_gap(4, 1, 0.25, 2.0, Interval::unit()).unwrap();
        assert!((r.bound - 0.551_631_3).abs() < 1e-6);
        assert!(r.measured >= r.bound * 0.98);
        assert!(noncompact_gap(2, 2, 0.25, 2.0, Interval::unit()).is_err());
    }

    #[test]
    fn minkowski_on_random_grid() {
        let n = unit_mesh(21);
        let g = BivariateGrid::random(3, n.clone(), n).unwrap();
        for h in [0.1, 0.2] {
            let r = minkowski_shift_check(&g, 2.0, h).unwrap();
            assert!(r.holds, "{r:?}");
        }
    }
}
