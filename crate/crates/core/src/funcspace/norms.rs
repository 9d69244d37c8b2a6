use crate::error::{domain, Result};
use crate::quad;
use crate::report::{BoundContext, BoundReport, InequalityId};

use super::{ClosedFormFunction, GridFunction, Interval};

/// Strong Lebesgue norm over an interval of the function's domain.
pub trait LpNorm {
    /// `(∫_a^b ||f(t)||^p dt)^{1/p}` (ess-sup for `p = ∞`); `+∞` when divergent.
    /// `None` means the whole domain.
    fn lp_norm_on(&self, p: f64, interval: Option<Interval>) -> Result<f64>;
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return domain(format!("norm exponent must be >= 1, got {p}"));
    }
    Ok(())
}

/// Free-function form of [`LpNorm::lp_norm_on`].
pub fn lp_norm<F: LpNorm + ?Sized>(f: &F, p: f64, interval: Option<Interval>) -> Result<f64> {
    f.lp_norm_on(p, interval)
}

impl LpNorm for GridFunction {
    fn lp_norm_on(&self, p: f64, interval: Option<Interval>) -> Result<f64> {
        check_p(p)?;
        let cells = clipped_cells(self, interval)?;
        if p.is_infinite() {
            return Ok(cells.iter().fold(0.0, |m, c| m.max(c.0).max(c.1)));
        }
        let total: f64 = cells.iter().map(|&(u, v, h)| cell_power_integral(u, v, h, p)).sum();
        Ok(total.powf(1.0 / p))
    }
}

impl LpNorm for ClosedFormFunction {
    fn lp_norm_on(&self, p: f64, interval: Option<Interval>) -> Result<f64> {
        check_p(p)?;
        let iv = match interval {
            Some(iv) => {
                if iv.start < self.t0() {
                    return domain(format!("interval starts at {} before t0 = {}", iv.start, self.t0()));
                }
                iv
            }
            None => self.support(),
        };
        Ok(self.lp_norm_on(p, iv))
    }
}

/// `∫` over a cell of length `h` of the `p`-th power of the linear function
/// running from `u` to `v` (both nonnegative).
pub(crate) fn cell_power_integral(u: f64, v: f64, h: f64, p: f64) -> f64 {
    if p == 1.0 {
        return 0.5 * h * (u + v);
    }
    let d = v - u;
    if d.abs() > 0.1 * u.max(v) {
        h * (v.powf(p + 1.0) - u.powf(p + 1.0)) / ((p + 1.0) * d)
    } else {
        h * quad::fixed(quad::gl8(), |s| (u + d * s).powf(p), 0.0, 1.0)
    }
}

/// `∫` over a cell of length `h` of `|ℓ|^p` for the linear `ℓ` running from
/// `u` to `v` (any signs), split at the zero crossing.
pub(crate) fn signed_cell_power_integral(u: f64, v: f64, h: f64, p: f64) -> f64 {
    if u * v >= 0.0 {
        return cell_power_integral(u.abs(), v.abs(), h, p);
    }
    let z = h * u.abs() / (u.abs() + v.abs());
    cell_power_integral(u.abs(), 0.0, z, p) + cell_power_integral(0.0, v.abs(), h - z, p)
}

/// `(m_left, m_right, length)` for every cell overlapping the interval, with
/// magnitudes interpolated linearly at clipped ends.
fn clipped_cells(f: &GridFunction, interval: Option<Interval>) -> Result<Vec<(f64, f64, f64)>> {
    let nodes = f.nodes();
    let mags = f.magnitudes();
    let (t0, t1) = (f.t0(), f.t1());
    let (a, b) = match interval {
        None => (t0, t1),
        Some(iv) => {
            if !(iv.start < iv.end) {
                return domain(format!("empty interval [{}, {}]", iv.start, iv.end));
            }
            let slack = 1e-12 * (t1 - t0).max(t1.abs());
            if iv.start < t0 - slack || iv.end > t1 + slack {
                return domain(format!(
                    "interval [{}, {}] is not inside the grid domain [{t0}, {t1}]",
                    iv.start, iv.end
                ));
            }
            (iv.start.max(t0), iv.end.min(t1))
        }
    };
    let mut out = Vec::with_capacity(nodes.len());
    for i in 0..nodes.len() - 1 {
        let (x0, x1) = (nodes[i], nodes[i + 1]);
        if x1 <= a || x0 >= b {
            continue;
        }
        let lerp = |t: f64| mags[i] + (mags[i + 1] - mags[i]) * (t - x0) / (x1 - x0);
        let lo = x0.max(a);
        let hi = x1.min(b);
        let ml = if lo == x0 { mags[i] } else { lerp(lo) };
        let mr = if hi == x1 { mags[i + 1] } else { lerp(hi) };
        out.push((ml, mr, hi - lo));
    }
    Ok(out)
}

/// `λ_f(r)`: length of the set where the interpolated magnitude exceeds `r`.
pub fn distribution_function(f: &GridFunction, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("distribution function needs r > 0, got {r}"));
    }
    let cells = clipped_cells(f, None)?;
    Ok(measure_above(&cells, r, false))
}

fn measure_above(cells: &[(f64, f64, f64)], r: f64, inclusive: bool) -> f64 {
    cells
        .iter()
        .map(|&(u, v, h)| {
            let (lo, hi) = (u.min(v), u.max(v));
            let above = |x: f64| if inclusive { x >= r } else { x > r };
            if hi == lo {
                if above(hi) {
                    h
                } else {
                    0.0
                }
            } else if r < lo || (inclusive && r == lo) {
                h
            } else if r >= hi {
                0.0
            } else {
                h * (hi - r) / (hi - lo)
            }
        })
        .sum()
}

/// Maximizer of `r^p λ_f(r)` found by [`weak_lp_quasinorm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakNormArgmax {
    pub value: f64,
    pub level: f64,
    pub measure: f64,
}

/// `[f]_{L_w^p} = sup_{r>0} r λ_f(r)^{1/p}` for the interpolated magnitude.
pub fn weak_lp_quasinorm(f: &GridFunction, p: f64) -> Result<f64> {
    weak_lp_argmax(f, p, None).map(|w| w.value)
}

/// [`weak_lp_quasinorm`] restricted to an interval, with the maximizing level.
pub fn weak_lp_argmax(f: &GridFunction, p: f64, interval: Option<Interval>) -> Result<WeakNormArgmax> {
    check_p(p)?;
    if p.is_infinite() {
        return domain("weak quasi-norm needs a finite exponent");
    }
    let cells = clipped_cells(f, interval)?;
    Ok(weak_from_cells(&cells, p))
}

const FLAT_RTOL: f64 = 1e-9;

/// Sweep over the levels where `λ` changes form.
///
/// Between consecutive node magnitudes `λ(r) = A - B r` is linear, so
/// `r^p λ(r)` peaks either at a left limit of a breakpoint or at the
/// stationary point `r* = pA / ((p+1)B)`.
fn weak_from_cells(cells: &[(f64, f64, f64)], p: f64) -> WeakNormArgmax {
    let mut events: Vec<(f64, f64, f64)> = Vec::with_capacity(2 * cells.len());
    let mut a_coef = 0.0;
    for &(u, v, h) in cells {
        let (lo, hi) = (u.min(v), u.max(v));
        if hi <= 0.0 || h <= 0.0 {
            continue;
        }
        a_coef += h;
        if hi - lo <= FLAT_RTOL * hi {
            events.push((hi, -h, 0.0));
        } else {
            let slope = h / (hi - lo);
            events.push((lo, slope * hi - h, slope));
            events.push((hi, -slope * hi, -slope));
        }
    }
    let zero = WeakNormArgmax { value: 0.0, level: 0.0, measure: 0.0 };
    if events.is_empty() {
        return zero;
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut b_coef = 0.0;
    let mut prev = 0.0;
    let mut best = (0.0_f64, 0.0_f64);
    let mut i = 0;
    while i < events.len() {
        let v = events[i].0;
        if v > prev {
            let at_v = v.powf(p) * (a_coef - b_coef * v);
            if at_v > best.0 {
                best = (at_v, v);
            }
            if b_coef > 0.0 {
                let r = p * a_coef / ((p + 1.0) * b_coef);
                if r > prev && r < v {
                    let g = r.powf(p) * (a_coef - b_coef * r);
                    if g > best.0 {
                        best = (g, r);
                    }
                }
            }
            prev = v;
        }
        while i < events.len() && events[i].0 == v {
            a_coef += events[i].1;
            b_coef += events[i].2;
            i += 1;
        }
    }
    if best.1 == 0.0 {
        return zero;
    }
    // Re-evaluate the winner exactly; accumulated sums may drift.
    let (mut value, mut level, mut measure) = (0.0, best.1, 0.0);
    for r in [best.1, best.1 * (1.0 - 2.0 * FLAT_RTOL)] {
        let m = measure_above(cells, r, true);
        let g = r.powf(p) * m;
        if g > value {
            value = g;
            level = r;
            measure = m;
        }
    }
    WeakNormArgmax { value: value.powf(1.0 / p), level, measure }
}

fn context(f: &GridFunction, p: f64, q: f64) -> BoundContext {
    BoundContext { p, alpha: None, q, t0: f.t0(), t1: f.t1() }
}

/// `[f]_{L_w^p} ≤ ||f||_{L^p}`.
pub fn chebyshev_check(f: &GridFunction, p: f64) -> Result<BoundReport> {
    let lhs = weak_lp_quasinorm(f, p)?;
    let rhs = f.lp_norm_on(p, None)?;
    Ok(BoundReport::new(InequalityId::Chebyshev, lhs, 1.0, rhs, 0.0, context(f, p, p)))
}

/// The three embeddings between strong and weak spaces on a bounded
/// interval, for `1 ≤ p < q ≤ ∞`. With `q = ∞` only the weak-from-strong
/// embedding applies.
pub fn embedding_check(f: &GridFunction, p: f64, q: f64, interval: Option<Interval>) -> Result<Vec<BoundReport>> {
    check_p(p)?;
    if p.is_infinite() || q.is_nan() || q <= p {
        return domain(format!("embeddings need 1 <= p < q <= ∞, got p={p}, q={q}"));
    }
    let (a, b) = match interval {
        Some(iv) => (iv.start, iv.end),
        None => (f.t0(), f.t1()),
    };
    let len = b - a;
    let ctx = BoundContext { p, alpha: None, q, t0: a, t1: b };
    let weak_p = weak_lp_argmax(f, p, interval)?.value;
    let mut out = Vec::with_capacity(3);
    if q.is_infinite() {
        let c = len.powf(1.0 / p);
        let sup = f.lp_norm_on(f64::INFINITY, interval)?;
        out.push(BoundReport::new(InequalityId::EmbeddingWeakStrong, weak_p, c, sup, 0.0, ctx));
        return Ok(out);
    }
    let power = len.powf((q - p) / (p * q));
    let c_weak = (q / (q - p)).powf(1.0 / p) * power;
    let strong_p = f.lp_norm_on(p, interval)?;
    let strong_q = f.lp_norm_on(q, interval)?;
    let weak_q = weak_lp_argmax(f, q, interval)?.value;
    out.push(BoundReport::new(InequalityId::EmbeddingStrongWeak, strong_p, c_weak, weak_q, 0.0, ctx));
    out.push(BoundReport::new(InequalityId::EmbeddingWeakStrong, weak_p, power, strong_q, 0.0, ctx));
    out.push(BoundReport::new(InequalityId::EmbeddingWeakWeak, weak_p, c_weak, weak_q, 0.0, ctx));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::mesh;

    fn identity(n: usize) -> GridFunction {
        GridFunction::sample(&mesh::uniform(0.0, 1.0, n).unwrap(), |t| t).unwrap()
    }

    #[test]
    fn constant_function_norms() {
        let f = GridFunction::sample(&mesh::uniform(0.0, 1.0, 17).unwrap(), |_| 1.0).unwrap();
        assert!((lp_norm(&f, 2.0, None).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(distribution_function(&f, 0.5).unwrap(), 1.0);
        assert_eq!(distribution_function(&f, 1.5).unwrap(), 0.0);
        assert!((weak_lp_quasinorm(&f, 3.0).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn identity_norms() {
        let f = identity(1025);
        let l2 = lp_norm(&f, 2.0, None).unwrap();
        assert!((l2 - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((distribution_function(&f, 0.3).unwrap() - 0.7).abs() < 1e-14);
        let w = weak_lp_quasinorm(&f, 2.0).unwrap();
        assert!((w - (4.0f64 / 27.0).sqrt()).abs() < 1e-12, "{w}");
    }

    #[test]
    fn restricted_interval() {
        let f = identity(5);
        let v = lp_norm(&f, 1.0, Some(Interval::new(0.5, 1.0).unwrap())).unwrap();
        assert!((v - 0.375).abs() < 1e-15);
        let v = lp_norm(&f, 1.0, Some(Interval::new(0.1, 0.3).unwrap())).unwrap();
        assert!((v - 0.04).abs() < 1e-15);
        assert!(lp_norm(&f, 1.0, Some(Interval::new(0.5, 2.0).unwrap())).is_err());
        assert!(lp_norm(&f, 0.5, None).is_err());
    }

    #[test]
    fn bad_arguments() {
        let f = identity(5);
        assert!(distribution_function(&f, 0.0).is_err());
        assert!(weak_lp_quasinorm(&f, 0.9).is_err());
        assert!(embedding_check(&f, 2.0, 2.0, None).is_err());
    }

    #[test]
    fn embeddings_for_constant() {
        let f = GridFunction::sample(&mesh::uniform(0.0, 1.0, 17).unwrap(), |_| 1.0).unwrap();
        let reps = embedding_check(&f, 2.0, 4.0, None).unwrap();
        assert_eq!(reps.len(), 3);
        assert!((reps[0].lhs - 1.0).abs() < 1e-12);
        assert!((reps[0].rhs - 2f64.sqrt()).abs() < 1e-8);
        assert!(reps.iter().all(|r| r.holds));
    }

    #[test]
    fn zero_function_embeddings_hold_with_equality() {
        let f = GridFunction::zeros(&mesh::uniform(0.0, 1.0, 9).unwrap(), 2, Default::default()).unwrap();
        for r in embedding_check(&f, 1.0, 2.0, None).unwrap() {
            assert_eq!((r.lhs, r.rhs, r.holds), (0.0, 0.0, true));
        }
        assert!(chebyshev_check(&f, 2.0).unwrap().holds);
    }
}
