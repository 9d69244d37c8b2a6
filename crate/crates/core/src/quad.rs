//! Quadrature building blocks: Gauss-Legendre rules, a globally adaptive
//! Gauss-Kronrod (7/15) integrator, and incomplete beta-type integrals with
//! endpoint-singularity substitutions.

use std::sync::OnceLock;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = r * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * r, ((kron - gauss) * r).abs())
}

/// Tolerances for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_segments: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-300, rel: 1e-13, max_segments: 4000 }
    }
}

impl Tolerance {
    pub fn rel(rel: f64) -> Self {
        Tolerance { rel, ..Default::default() }
    }
}

/// Globally adaptive Gauss-Kronrod quadrature of `f` over `[a, b]`.
///
/// Returns `(value, error_estimate)`. The segment with the largest error is
/// bisected until the summed error meets the tolerance or the segment budget
/// is spent.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let mut segs: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(64);
    let (v, e) = gk15(&f, a, b);
    segs.push((a, b, v, e));
    loop {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= tol.abs.max(tol.rel * total.abs()) || segs.len() >= tol.max_segments {
            return (total, err);
        }
        let (idx, _) = segs.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, s)| {
                if s.3 > acc.1 {
                    (i, s.3)
                } else {
                    acc
                }
            },
        );
        let (sa, sb, _, _) = segs.swap_remove(idx);
        let m = 0.5 * (sa + sb);
        if m <= sa || m >= sb {
            // Segment cannot be split further in floating point.
            let total: f64 = segs.iter().map(|s| s.2).sum::<f64>();
            let (v, e) = gk15(&f, sa, sb);
            return (total + v, err.max(e));
        }
        let (v1, e1) = gk15(&f, sa, m);
        let (v2, e2) = gk15(&f, m, sb);
        segs.push((sa, m, v1, e1));
        segs.push((m, sb, v2, e2));
    }
}

/// Convenience wrapper returning only the value.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> f64 {
    adaptive(f, a, b, tol).0
}

/// Integral over `[a, ∞)`: direct on `[a, a+1]`, then `t = a + 1/u` for the tail.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: Tolerance) -> f64 {
    let head = integrate(&f, a, a + 1.0, tol);
    let tail = integrate(
        |u| {
            if u == 0.0 {
                return 0.0;
            }
            let v = f(a + 1.0 / u);
            if v == 0.0 {
                0.0
            } else {
                v / (u * u)
            }
        },
        0.0,
        1.0,
        tol,
    );
    head + tail
}

/// `∫_{v0}^{v1} v^{a-1} (1-v)^{b-1} dv` for `0 ≤ v0 < v1 ≤ 1`.
///
/// Power singularities at either end are removed by the substitutions
/// `w = v^a` (left half) and `z = (1-v)^b` (right half) whenever the
/// corresponding exponent lies in `(0, 1)`.
pub fn beta_segment(a: f64, b: f64, v0: f64, v1: f64, tol: Tolerance) -> f64 {
    debug_assert!(0.0 <= v0 && v0 < v1 && v1 <= 1.0);
    let m = 0.5 * (v0 + v1);
    left_part(a, b, v0, m, tol) + right_part(a, b, m, v1, tol)
}

fn left_part(a: f64, b: f64, v0: f64, v1: f64, tol: Tolerance) -> f64 {
    if a > 0.0 && a < 1.0 {
        // v = w^{1/a}; v^{a-1} dv = dw / a
        let inv = 1.0 / a;
        let w0 = v0.powf(a);
        let w1 = v1.powf(a);
        integrate(|w| (1.0 - w.powf(inv)).powf(b - 1.0), w0, w1, tol) * inv
    } else {
        integrate(|v| v.powf(a - 1.0) * (1.0 - v).powf(b - 1.0), v0, v1, tol)
    }
}

fn right_part(a: f64, b: f64, v0: f64, v1: f64, tol: Tolerance) -> f64 {
    if b > 0.0 && b < 1.0 {
        // 1 - v = z^{1/b}; (1-v)^{b-1} dv = -dz / b
        let inv = 1.0 / b;
        let z0 = (1.0 - v1).powf(b);
        let z1 = (1.0 - v0).powf(b);
        integrate(|z| (1.0 - z.powf(inv)).powf(a - 1.0), z0, z1, tol) * inv
    } else {
        integrate(|v| v.powf(a - 1.0) * (1.0 - v).powf(b - 1.0), v0, v1, tol)
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Cached 8-point rule.
pub fn gl8() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(8))
}

/// Cached 16-point rule.
pub fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// Fixed Gauss-Legendre rule applied on `[a, b]`.
pub fn fixed<F: Fn(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    rule.0.iter().zip(&rule.1).map(|(x, w)| w * f(c + r * x)).sum::<f64>() * r
}
