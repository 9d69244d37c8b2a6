//! Node sets: uniform, power-graded toward the left end, and symmetric
//! grading around interior breakpoints.

use crate::error::{domain, Result};

fn check(t0: f64, t1: f64, n: usize, min: usize) -> Result<()> {
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return domain(format!("mesh needs finite t0 < t1, got [{t0}, {t1}]"));
    }
    if n < min {
        return domain(format!("mesh needs at least {min} nodes, got {n}"));
    }
    Ok(())
}

/// `n` equally spaced nodes from `t0` to `t1`.
pub fn uniform(t0: f64, t1: f64, n: usize) -> Result<Vec<f64>> {
    graded(t0, t1, n, 1.0)
}

/// `n` nodes `t0 + (t1-t0) (i/(n-1))^g`, `i = 0..n-1`.
pub fn graded(t0: f64, t1: f64, n: usize, g: f64) -> Result<Vec<f64>> {
    check(t0, t1, n, 2)?;
    if !(g >= 1.0 && g.is_finite()) {
        return domain(format!("grading exponent must be >= 1, got {g}"));
    }
    let m = (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n).map(|i| t0 + (t1 - t0) * (i as f64 / m).powf(g)).collect();
    nodes[n - 1] = t1;
    Ok(nodes)
}

/// `n` nodes `t0 + (t1-t0) (i/n)^g`, `i = 1..n`, for data singular at `t0`.
pub fn graded_open(t0: f64, t1: f64, n: usize, g: f64) -> Result<Vec<f64>> {
    check(t0, t1, n, 2)?;
    if !(g >= 1.0 && g.is_finite()) {
        return domain(format!("grading exponent must be >= 1, got {g}"));
    }
    let m = n as f64;
    let mut nodes: Vec<f64> = (1..=n).map(|i| t0 + (t1 - t0) * (i as f64 / m).powf(g)).collect();
    nodes[n - 1] = t1;
    if nodes[0] <= t0 {
        return domain("grading too strong: first node collapses onto t0");
    }
    Ok(nodes)
}

/// Grading exponent for data behaving like `(t-t0)^{-β}`: `2/(1-2β)`,
/// clamped to `[1, 6]`.
pub fn recommended_grading(beta: f64) -> f64 {
    if beta <= 0.0 {
        1.0
    } else if beta >= 0.5 {
        6.0
    } else {
        (2.0 / (1.0 - 2.0 * beta)).clamp(1.0, 6.0)
    }
}

/// `n + 1` nodes on `[a, b]` clustered toward both ends by
/// `φ(u) = u^g / (u^g + (1-u)^g)`.
pub fn two_sided(a: f64, b: f64, n: usize, g: f64) -> Result<Vec<f64>> {
    check(a, b, n, 1)?;
    let mut out: Vec<f64> = (0..=n)
        .map(|i| {
            let u = i as f64 / n as f64;
            let (x, y) = (u.powf(g), (1.0 - u).powf(g));
            a + (b - a) * x / (x + y)
        })
        .collect();
    out[0] = a;
    out[n] = b;
    out.dedup();
    Ok(out)
}

/// Concatenates [`two_sided`] meshes over consecutive breakpoints.
pub fn piecewise(breaks: &[f64], per_segment: usize, g: f64) -> Result<Vec<f64>> {
    if breaks.len() < 2 {
        return domain("need at least two breakpoints");
    }
    let mut nodes = vec![breaks[0]];
    for w in breaks.windows(2) {
        let seg = two_sided(w[0], w[1], per_segment, g)?;
        nodes.extend(seg.into_iter().skip(1).filter(|&t| t > w[0]));
    }
    nodes.dedup();
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return domain("breakpoints must be strictly increasing");
    }
    Ok(nodes)
}

/// Whether consecutive spacings agree to `1e-9` relative.
pub fn is_uniform(nodes: &[f64]) -> bool {
    if nodes.len() < 3 {
        return true;
    }
    let h = (nodes[nodes.len() - 1] - nodes[0]) / (nodes.len() - 1) as f64;
    nodes.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_endpoints_and_monotone() {
        let m = graded(1.0, 3.0, 17, 3.0).unwrap();
        assert_eq!(m[0], 1.0);
        assert_eq!(m[16], 3.0);
        assert!(m.windows(2).all(|w| w[1] > w[0]));
        assert!(uniform(0.0, 1.0, 1).is_err());
        assert!(graded(0.0, 1.0, 5, 0.5).is_err());
    }

    #[test]
    fn open_mesh_excludes_left_end() {
        let m = graded_open(0.0, 1.0, 2048, 6.0).unwrap();
        assert!(m[0] > 0.0 && m[0] < 1e-18);
        assert_eq!(m.len(), 2048);
        assert_eq!(*m.last().unwrap(), 1.0);
    }

    #[test]
    fn piecewise_hits_breakpoints() {
        let m = piecewise(&[0.0, 0.25, 1.0], 16, 2.0).unwrap();
        assert!(m.contains(&0.25));
        assert!(m.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(m.len(), 33);
        assert!(is_uniform(&uniform(0.0, 1.0, 9).unwrap()));
        assert!(!is_uniform(&m));
    }

    #[test]
    fn grading_recommendation() {
        assert_eq!(recommended_grading(0.25), 4.0);
        assert_eq!(recommended_grading(0.0), 1.0);
        assert_eq!(recommended_grading(0.7), 6.0);
    }
}
