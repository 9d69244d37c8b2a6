mod common;

use fraclab::bounds::verify_into_itself;
use fraclab::fracint::{
    halfline_from, iterated_increment, rl_integral_at, rl_integral_closed_form, rl_integral_grid, rl_integral_grid_fft,
    rl_integral_halfline, FracIntegralPlan,
};
use fraclab::funcspace::mesh;
use fraclab::random::random_piecewise_linear;
use fraclab::{ClosedFormFunction, GridFunction, Interval, VectorNorm};
use proptest::prelude::*;

#[test]
fn singular_data_on_graded_mesh() {
    let nodes = mesh::graded(1e-8, 1.0, 2048, 4.0).unwrap();
    let f = GridFunction::sample(&nodes, |t| t.powf(-0.5)).unwrap();
    let j = rl_integral_grid(&f, 0.25).unwrap();
    let oracle = common::gamma(0.5) / common::gamma(0.75);
    let v = j.value(j.len() - 1)[0];
    assert!(common::rel_close(v, oracle, 1e-3), "{v} vs {oracle}");
    assert!((oracle - 1.446410).abs() < 1e-6);
}

#[test]
fn closed_form_images() {
    let f = ClosedFormFunction::power(0.0, Interval::unit(), 1.0, 0.5).unwrap();
    let v = rl_integral_closed_form(&f, 0.25, 1.0).unwrap()[0];
    assert!(common::rel_close(v, common::gamma(0.5) / common::gamma(0.75), 1e-12));

    let f = ClosedFormFunction::power(0.0, Interval::unit(), 1.0, 0.25).unwrap();
    let v = rl_integral_closed_form(&f, 0.5, 1.0).unwrap()[0];
    let oracle = common::rl_integral(|s| s.powf(-0.25), 0.5, 0.0, 1.0, &[0.5]);
    assert!((v - oracle).abs() < 1e-9, "{v} vs {oracle}");
    assert!((v - 1.3519565).abs() < 1e-6);

    let c = ClosedFormFunction::power(0.0, Interval::new(0.0, 2.0).unwrap(), 3.0, 0.0).unwrap();
    let v = rl_integral_closed_form(&c, 0.7, 2.0).unwrap()[0];
    assert!(common::rel_close(v, 3.0 * 2f64.powf(0.7) / common::gamma(1.7), 1e-12));
}

#[test]
fn halfline_images() {
    let one = ClosedFormFunction::power(0.0, halfline_from(0.0).unwrap(), 1.0, 0.0).unwrap();
    let img = rl_integral_halfline(&one, 0.5, 2.0, 1e-4).unwrap();
    assert!((img.value(img.len() - 1)[0] - 1.595769).abs() < 1e-6);

    let shifted = ClosedFormFunction::power(0.0, halfline_from(1.0).unwrap(), 1.0, 0.6).unwrap();
    let img = rl_integral_halfline(&shifted, 0.25, 3.0, 1e-4).unwrap();
    let oracle = common::rl_integral(|s| s.powf(-0.6), 0.25, 1.0, 3.0, &[2.0]);
    let v = img.value(img.len() - 1)[0];
    assert!((v - oracle).abs() < 1e-6, "{v} vs {oracle}");
    for (t, v) in img.nodes().iter().zip(img.values()) {
        if *t <= 1.0 {
            assert_eq!(*v, 0.0);
        }
    }
}

#[test]
fn increment_examples() {
    let nodes = mesh::uniform(0.0, 1.0, 65).unwrap();
    let zero = GridFunction::sample(&nodes, |_| 0.0).unwrap();
    assert_eq!(iterated_increment(&zero, 0.5, 0.25, 0.75).unwrap(), vec![0.0]);
    let one = GridFunction::sample(&nodes, |_| 1.0).unwrap();
    let v = iterated_increment(&one, 0.5, 0.25, 0.75).unwrap()[0];
    let oracle = (0.75f64.powf(1.5) - 0.25f64.powf(1.5)) / common::gamma(2.5);
    assert!((v - oracle).abs() < 1e-12);
    assert!((v - 0.394573).abs() < 5e-6);
}

#[test]
fn increment_matches_direct_quadrature() {
    let nodes = mesh::uniform(0.0, 1.0, 129).unwrap();
    for seed in 0..100u64 {
        let f = random_piecewise_linear(seed, &nodes, 1, VectorNorm::Euclidean).unwrap();
        let (a, b) = (0.1 + 0.003 * seed as f64, 0.9 - 0.002 * seed as f64);
        let inc = iterated_increment(&f, 0.4, a, b).unwrap()[0];
        let mut pts = vec![a];
        pts.extend(nodes.iter().copied().filter(|&t| t > a && t < b));
        pts.push(b);
        let direct = common::tanh_sinh_pieces(|s| rl_integral_at(&f, 0.4, s).unwrap()[0], &pts);
        assert!((inc - direct).abs() <= 5e-4 * direct.abs(), "seed {seed}: {inc} vs {direct}");
    }
}

#[test]
fn grid_image_matches_tanh_sinh_oracle() {
    let nodes = mesh::graded(0.0, 1.0, 97, 1.7).unwrap();
    for seed in [3u64, 17, 41] {
        let f = random_piecewise_linear(seed, &nodes, 1, VectorNorm::Euclidean).unwrap();
        let j = rl_integral_grid(&f, 0.35).unwrap();
        let vals = f.values().to_vec();
        for n in [10, 50, 96] {
            let oracle = common::rl_integral(|s| common::interp(&nodes, &vals, s), 0.35, 0.0, nodes[n], &nodes);
            assert!((j.value(n)[0] - oracle).abs() < 1e-10 * (1.0 + oracle.abs()), "seed {seed} n {n}");
        }
    }
}

#[test]
fn semigroup() {
    let nodes = mesh::uniform(0.0, 1.0, 513).unwrap();
    let f = GridFunction::sample(&nodes, |t| (2.0 * t).cos() + t).unwrap();
    for a in [0.25, 0.5] {
        for b in [0.25, 0.5] {
            let ab = rl_integral_grid(&rl_integral_grid(&f, b).unwrap(), a).unwrap();
            let direct = rl_integral_grid(&f, a + b).unwrap();
            for n in [128, 256, 512] {
                let (x, y) = (ab.value(n)[0], direct.value(n)[0]);
                assert!(common::rel_close(x, y, 1e-3), "({a},{b}) n={n}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn fft_backend_matches_direct_on_random_data() {
    let nodes = mesh::uniform(0.0, 2.0, 400).unwrap();
    for seed in 0..5 {
        let f = random_piecewise_linear(seed, &nodes, 2, VectorNorm::Max).unwrap();
        let d = rl_integral_grid(&f, 0.3).unwrap();
        let q = rl_integral_grid_fft(&f, 0.3).unwrap();
        for (x, y) in d.values().iter().zip(q.values()) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn into_itself_bound_on_random_functions() {
    let nodes = mesh::graded(0.0, 1.0, 257, 1.3).unwrap();
    for seed in 0..200u64 {
        let f = random_piecewise_linear(seed, &nodes, 2, VectorNorm::Euclidean).unwrap();
        let p = [1.0, 2.0, 4.0][seed as usize % 3];
        let r = verify_into_itself(&f, 0.6, p).unwrap();
        assert!(r.lhs <= r.rhs * (1.0 + 1e-6), "seed {seed}: {r:?}");
    }
}

#[test]
fn invalid_orders() {
    let f = GridFunction::sample(&mesh::uniform(0.0, 1.0, 9).unwrap(), |t| t).unwrap();
    assert!(rl_integral_grid(&f, 0.0).is_err());
    assert!(rl_integral_grid(&f, -0.5).is_err());
    assert!(FracIntegralPlan::new(f.nodes(), f64::NAN).is_err());
}

fn random_fn(seed: u64) -> GridFunction {
    random_piecewise_linear(seed, &mesh::graded(0.0, 1.0, 65, 1.5).unwrap(), 1, VectorNorm::Euclidean).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linearity(s1 in any::<u64>(), s2 in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0, alpha in 0.05f64..2.0) {
        let (f, g) = (random_fn(s1), random_fn(s2));
        let lhs = rl_integral_grid(&f.combine(a, &g, b).unwrap(), alpha).unwrap();
        let jf = rl_integral_grid(&f, alpha).unwrap();
        let jg = rl_integral_grid(&g, alpha).unwrap();
        for i in 0..lhs.len() {
            let rhs = a * jf.value(i)[0] + b * jg.value(i)[0];
            prop_assert!((lhs.value(i)[0] - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn positivity(seed in any::<u64>(), alpha in 0.05f64..2.0) {
        let f = random_fn(seed);
        let mags = f.magnitudes();
        let pos = f.with_values(mags).unwrap();
        let j = rl_integral_grid(&pos, alpha).unwrap();
        prop_assert!(j.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn causality(seed in any::<u64>(), cut in 1usize..63, alpha in 0.1f64..1.5) {
        let f = random_fn(seed);
        let mut altered = f.values().to_vec();
        for v in altered.iter_mut().skip(cut + 1) {
            *v += 7.0;
        }
        let g = f.with_values(altered).unwrap();
        let (jf, jg) = (rl_integral_grid(&f, alpha).unwrap(), rl_integral_grid(&g, alpha).unwrap());
        for i in 0..=cut {
            prop_assert_eq!(jf.value(i)[0], jg.value(i)[0]);
        }
    }
}
