#![allow(clippy::approx_constant)]

mod common;

use fraclab::fracderiv::{
    caputo_derivative, fractional_mvt_locate, kernel_difference_identity, kernel_identity_constant, rl_derivative,
    SmoothGridFunction,
};
use fraclab::fracint::rl_integral_grid;
use fraclab::funcspace::mesh;
use fraclab::{FracError, GridFunction};

fn unit(n: usize) -> Vec<f64> {
    mesh::uniform(0.0, 1.0, n).unwrap()
}

#[test]
fn caputo_examples() {
    let nodes = unit(257);
    let f = SmoothGridFunction::from_fn(&nodes, |t| t, |_| 1.0).unwrap();
    let d = caputo_derivative(&f, 0.5).unwrap();
    assert!((d.value(256)[0] - 1.0 / common::gamma(1.5)).abs() < 1e-12);
    assert!((d.value(256)[0] - 1.128379).abs() < 1e-6);

    let c = SmoothGridFunction::from_fn(&nodes, |_| 4.0, |_| 0.0).unwrap();
    assert!(caputo_derivative(&c, 0.3).unwrap().values().iter().all(|&v| v == 0.0));

    let sq = SmoothGridFunction::from_fn(&nodes, |t| t * t, |t| 2.0 * t).unwrap();
    let d = caputo_derivative(&sq, 0.25).unwrap();
    for n in [32, 128, 256] {
        let t = nodes[n];
        let oracle = common::rl_integral(|s| 2.0 * s, 0.75, 0.0, t, &[]);
        assert!((d.value(n)[0] - oracle).abs() < 1e-5, "t={t}");
        assert!((oracle - 2.0 * t.powf(1.75) / common::gamma(2.75)).abs() < 1e-10);
    }
    assert!(caputo_derivative(&sq, 1.0).is_err());
}

#[test]
fn rl_derivative_examples() {
    let graded = mesh::graded(0.0, 1.0, 1025, 2.0).unwrap();
    let line = GridFunction::sample(&graded, |t| t).unwrap();
    let rl = rl_derivative(&line, 0.5).unwrap();
    let cap = caputo_derivative(&SmoothGridFunction::from_fn(&graded, |t| t, |_| 1.0).unwrap(), 0.5).unwrap();
    for n in 1..1024 {
        assert!((rl.value(n)[0] - cap.value(n)[0]).abs() < 1e-3, "n={n}");
    }

    let nodes = unit(1025);
    let one = GridFunction::sample(&nodes, |_| 1.0).unwrap();
    let d = rl_derivative(&one, 0.5).unwrap();
    for (n, &t) in nodes.iter().enumerate().filter(|(_, &t)| t >= 0.1) {
        let expect = t.powf(-0.5) / common::gamma(0.5);
        assert!((d.value(n)[0] - expect).abs() < 1e-3, "t={t}");
    }

    let zero = GridFunction::sample(&nodes, |_| 0.0).unwrap();
    assert!(rl_derivative(&zero, 0.5).unwrap().values().iter().all(|&v| v == 0.0));
}

#[test]
fn caputo_tends_to_first_derivative() {
    let nodes = unit(513);
    let f = SmoothGridFunction::from_fn(&nodes, |t| 1.0 - (3.0 * t).cos(), |t| 3.0 * (3.0 * t).sin()).unwrap();
    let d = caputo_derivative(&f, 0.999).unwrap();
    let worst = (1..512).map(|n| (d.value(n)[0] - 3.0 * (3.0 * nodes[n]).sin()).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-2, "{worst}");

    // with f'(t0) != 0 the limit is nonuniform near t0: cD^α t = t^{1-α}/Γ(2-α)
    let f = SmoothGridFunction::from_fn(&nodes, |t| (3.0 * t).sin(), |t| 3.0 * (3.0 * t).cos()).unwrap();
    let d = caputo_derivative(&f, 0.999).unwrap();
    let worst = (1..512)
        .filter(|&n| nodes[n] >= 0.1)
        .map(|n| (d.value(n)[0] - 3.0 * (3.0 * nodes[n]).cos()).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-2, "{worst}");
}

#[test]
fn derivative_is_left_inverse_of_integral() {
    let nodes = unit(1025);
    for alpha in [0.3, 0.5, 0.7] {
        let f = GridFunction::sample(&nodes, |t| t + t * t).unwrap();
        let back = rl_derivative(&rl_integral_grid(&f, alpha).unwrap(), alpha).unwrap();
        for n in 1..1024 {
            assert!((back.value(n)[0] - f.value(n)[0]).abs() < 5e-3, "alpha={alpha} n={n}");
        }
        // f(t0) != 0 puts a t^α corner in the first cells; checked away from t0
        let f = GridFunction::sample(&nodes, |t| 1.0 + t * t).unwrap();
        let back = rl_derivative(&rl_integral_grid(&f, alpha).unwrap(), alpha).unwrap();
        for n in (1..1024).filter(|&n| nodes[n] >= 0.1) {
            assert!((back.value(n)[0] - f.value(n)[0]).abs() < 5e-3, "alpha={alpha} n={n}");
        }
    }
}

#[test]
fn rl_and_caputo_agree_when_f_vanishes_at_t0() {
    let nodes = mesh::graded(0.0, 1.0, 1025, 2.0).unwrap();
    let g = |t: f64| t * (1.0 - t).exp();
    let rl = rl_derivative(&GridFunction::sample(&nodes, g).unwrap(), 0.4).unwrap();
    let sm = SmoothGridFunction::from_fn(&nodes, g, |t| (1.0 - t) * (1.0 - t).exp()).unwrap();
    let cap = caputo_derivative(&sm, 0.4).unwrap();
    for n in 1..1024 {
        assert!((rl.value(n)[0] - cap.value(n)[0]).abs() < 1e-3, "n={n}");
    }
}

#[test]
fn mean_value_point_for_identity() {
    let nodes = unit(257);
    let f = SmoothGridFunction::from_fn(&nodes, |t| t, |_| 1.0).unwrap();
    let m = fractional_mvt_locate(&f, 0.5).unwrap();
    // ξ^{1-α} = Γ(2-α) Γ(1+α)
    let oracle = (common::gamma(1.5) * common::gamma(1.5)).powi(2);
    assert!((m.xi - oracle).abs() < 1e-6);
    assert!((m.xi - 0.616850).abs() < 1e-6);
    assert!(m.residual.abs() < 1e-8);
}

#[test]
fn mean_value_point_for_square() {
    let nodes = unit(513);
    let f = SmoothGridFunction::from_fn(&nodes, |t| t * t, |t| 2.0 * t).unwrap();
    let m = fractional_mvt_locate(&f, 0.25).unwrap();
    assert!(m.xi > 0.0 && m.xi < 1.0);
    assert!(m.residual.abs() < 1e-6);
    let dense = (1..=10_000)
        .map(|i| {
            let t = i as f64 / 10_000.0;
            (1.0 - 2.0 * t.powf(1.75) / common::gamma(2.75) / common::gamma(1.25)).abs()
        })
        .fold(f64::INFINITY, f64::min);
    assert!(dense < 1e-3);
}

#[test]
fn kernel_identity_examples() {
    let m = kernel_difference_identity(1.0, 1.0, 0.5, 0.25).unwrap();
    assert!(m.xi > 0.0 && m.xi < 1.0 && m.residual.abs() < 1e-8);
    let m = kernel_difference_identity(1.0, 2.0, 0.5, 0.25).unwrap();
    assert!((m.lhs - (2f64.powf(-0.5) - 3f64.powf(-0.5))).abs() < 1e-15);
    assert!((m.lhs - 0.129758).abs() < 5e-6);
    let c = kernel_identity_constant(0.5, 0.25);
    assert!((c - 0.5 / (common::gamma(1.25) * common::gamma(0.75))).abs() < 1e-13);

    match kernel_difference_identity(1e-8, 1.0, 0.5, 0.25) {
        Ok(m) => assert!(m.residual.abs() < 1e-10),
        Err(FracError::NotLocated { min_residual, .. }) => assert!(min_residual < 1e-10),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn kernel_identity_grid() {
    for l in [0.1, 1.0, 5.0] {
        for x in [0.05, 1.0, 10.0] {
            for beta in [0.1, 0.25, 0.4] {
                let m = kernel_difference_identity(l, x, 0.5, beta).unwrap();
                assert!(m.residual.abs() < 1e-6, "(l,x,β)=({l},{x},{beta}): {}", m.residual);
                assert!(m.xi > 0.0 && m.xi < l);
            }
        }
    }
}
