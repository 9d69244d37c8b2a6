//! Seeded random test functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::funcspace::{GridFunction, VectorNorm};

/// Random piecewise-linear function sampled on `nodes`.
///
/// Between 2 and 12 knots (always including both ends) carry values of a
/// random magnitude scale; about one draw in five also gets a narrow tent
/// spike. The same `seed` always yields the same function.
pub fn random_piecewise_linear(seed: u64, nodes: &[f64], dim: usize, norm: VectorNorm) -> Result<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (t0, t1) = (nodes[0], nodes[nodes.len() - 1]);
    let len = t1 - t0;
    let knots: usize = rng.gen_range(2..=12);
    let mut xs: Vec<f64> = (0..knots - 2).map(|_| t0 + len * rng.gen::<f64>()).collect();
    xs.push(t0);
    xs.push(t1);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let scale = rng.gen_range(-2.0f64..2.0).exp();
    let ys: Vec<Vec<f64>> = xs.iter().map(|_| (0..dim).map(|_| scale * rng.gen_range(-1.0..1.0)).collect()).collect();
    let spike = if rng.gen_bool(0.2) {
        let width = len * rng.gen_range(0.01..0.1);
        let centre = t0 + len * rng.gen::<f64>();
        let height = scale * rng.gen_range(1.0..10.0);
        Some((centre, width, height))
    } else {
        None
    };

    let mut values = Vec::with_capacity(nodes.len() * dim);
    for &t in nodes {
        let j = match xs.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(j) => j.min(xs.len() - 2),
            Err(j) => j.saturating_sub(1).min(xs.len() - 2),
        };
        let w = ((t - xs[j]) / (xs[j + 1] - xs[j])).clamp(0.0, 1.0);
        let bump = spike.map_or(0.0, |(c, wd, h)| h * (1.0 - (t - c).abs() / wd).max(0.0));
        for (a, b) in ys[j].iter().zip(&ys[j + 1]) {
            values.push(a + w * (b - a) + bump);
        }
    }
    GridFunction::new(nodes.to_vec(), values, dim, norm)
}

/// `count` consecutive seeds starting at `base`.
pub fn seed_list(base: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| base.wrapping_add(i)).collect()
}
