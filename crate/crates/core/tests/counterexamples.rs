mod common;

use fraclab::counterexamples::{
    beta_interval, divergence_probe, make_counterexample, membership_norm, CaseId, CounterexampleSpec, Growth,
};
use fraclab::{ClosedFormFunction, FracError, Interval};

fn spec(case: CaseId, p: f64, alpha: f64, eta: f64) -> CounterexampleSpec {
    CounterexampleSpec::new(case, p, alpha, eta)
}

fn all_cases() -> Vec<CounterexampleSpec> {
    vec![
        spec(CaseId::BoundedSuperFinite, 2.0, 0.25, 8.0),
        spec(CaseId::BoundedSuperInf, 2.0, 0.25, f64::INFINITY),
        spec(CaseId::HalflineSub, 2.0, 0.25, 1.0),
        spec(CaseId::HalflineSuper, 2.0, 0.25, 8.0),
        spec(CaseId::P1CriticalLog, 1.0, 0.5, 2.0),
        spec(CaseId::P1HalflineLow, 1.0, 0.5, 1.5),
        spec(CaseId::P1HalflineHigh, 1.0, 0.5, 3.0),
        spec(CaseId::P1HalflineInf, 1.0, 0.5, f64::INFINITY),
    ]
}

#[test]
fn construction_examples() {
    let s = spec(CaseId::BoundedSuperFinite, 2.0, 0.25, 8.0);
    assert_eq!(s.beta_interval().unwrap(), (0.375, 0.5));
    assert_eq!(s.beta().unwrap(), 0.4375);
    let f = make_counterexample(&s).unwrap();
    assert_eq!(f.support(), Interval::unit());
    for t in [0.01, 0.5, 1.0] {
        assert!(common::rel_close(f.profile(t), t.powf(-0.4375), 1e-14));
    }

    let s = spec(CaseId::HalflineSub, 2.0, 0.25, 1.0);
    assert_eq!(s.beta_interval().unwrap(), (0.5, 1.0));
    let f = make_counterexample(&s).unwrap();
    for t in [0.0, 0.5, 0.999] {
        assert_eq!(f.profile(t), 0.0);
    }
    assert!(f.profile(1.5) > 0.0);

    let s = spec(CaseId::P1HalflineLow, 1.0, 0.5, 1.5).with_interval(2.0, 3.0);
    assert_eq!(make_counterexample(&s).unwrap().support().start, 3.0);

    assert_eq!(beta_interval(CaseId::P1CriticalLog, 1.0, 0.5, 2.0).unwrap(), (1.0, 1.5));
    assert!(make_counterexample(&s.clone().with_beta(2.0)).is_err());
    assert!(beta_interval(CaseId::HalflineSub, 2.0, 0.25, 4.0).is_err());
    assert!(beta_interval(CaseId::BoundedSuperFinite, 1.0, 0.25, 8.0).is_err());
}

#[test]
fn every_case_is_a_member_of_its_source_space() {
    for s in all_cases() {
        let n = membership_norm(&s).unwrap();
        assert!(n.is_finite() && n > 0.0, "{}: {n}", s.case_id.as_str());
    }
    let b: f64 = 0.4375;
    let n = membership_norm(&spec(CaseId::BoundedSuperFinite, 2.0, 0.25, 8.0)).unwrap();
    assert!(common::rel_close(n, (1.0 / (1.0 - 2.0 * b)).sqrt(), 1e-10));
    let b: f64 = 0.75;
    let n = membership_norm(&spec(CaseId::HalflineSub, 2.0, 0.25, 1.0)).unwrap();
    assert!(common::rel_close(n, (1.0 / (2.0 * b - 1.0)).sqrt(), 1e-8));
}

#[test]
fn log_family_l1_norm() {
    for (alpha, t1) in [(0.5, 1.0), (0.25, 1.0), (0.5, 3.0)] {
        let s = spec(CaseId::P1CriticalLog, 1.0, alpha, 1.0 / (1.0 - alpha)).with_interval(0.0, t1);
        let b = s.beta().unwrap();
        let expect = 2.0 * t1 * 2f64.ln().powf(1.0 - b) / (b - 1.0);
        let n = membership_norm(&s).unwrap();
        assert!(common::rel_close(n, expect, 1e-4), "alpha={alpha} t1={t1}: {n} vs {expect}");
    }
}

#[test]
fn power_probe_matches_exact_tail_integral() {
    let (alpha, beta, eta) = (0.25, 0.4375, 8.0);
    let f = make_counterexample(&spec(CaseId::BoundedSuperFinite, 2.0, alpha, eta)).unwrap();
    let r = divergence_probe(&f, alpha, eta, None).unwrap();
    assert_eq!(r.growth, Growth::Power);
    assert!((r.theoretical_exponent + 0.5).abs() < 1e-12);
    assert!((r.fitted_slope + 0.5).abs() < 0.05, "{}", r.fitted_slope);
    assert!(r.monotone && r.plateau_free);

    let c = common::gamma(1.0 - beta) / common::gamma(1.0 + alpha - beta);
    for u in [0.01, 0.3, 1.0] {
        let img = common::rl_integral(|s| s.powf(-beta), alpha, 0.0, u, &[0.5 * u]);
        assert!(common::rel_close(img, c * u.powf(alpha - beta), 1e-9));
    }
    for (e, n) in r.eps.iter().zip(&r.truncated_norm_power) {
        let oracle = c.powf(eta) * ((alpha - beta) * eta + 1.0).recip() * (1.0 - e.powf((alpha - beta) * eta + 1.0));
        assert!(common::rel_close(*n, oracle, 1e-9), "eps={e}");
    }
}

#[test]
fn supercritical_probes_match_theoretical_rates() {
    let cases = [
        spec(CaseId::BoundedSuperFinite, 2.0, 0.25, 8.0),
        spec(CaseId::BoundedSuperFinite, 1.5, 0.3, 10.0),
        spec(CaseId::BoundedSuperFinite, 3.0, 0.1, 6.0),
        spec(CaseId::BoundedSuperInf, 2.0, 0.25, f64::INFINITY),
        spec(CaseId::HalflineSuper, 2.0, 0.25, 8.0),
        spec(CaseId::P1HalflineInf, 1.0, 0.5, f64::INFINITY),
    ];
    for s in cases {
        let f = make_counterexample(&s).unwrap();
        let r = divergence_probe(&f, s.alpha, s.eta, None).unwrap();
        assert!(r.theoretical_exponent < 0.0 && r.fitted_slope < 0.0);
        assert!(r.slope_error() < 0.1, "{}: {} vs {}", s.case_id.as_str(), r.fitted_slope, r.theoretical_exponent);
        assert!(r.monotone && r.plateau_free, "{}", s.case_id.as_str());
    }
    let s = spec(CaseId::BoundedSuperInf, 2.0, 0.25, f64::INFINITY);
    let r = divergence_probe(&make_counterexample(&s).unwrap(), 0.25, f64::INFINITY, None).unwrap();
    assert!((r.theoretical_exponent - (0.25 - 0.375)).abs() < 1e-12);
}

#[test]
fn critical_exponent_gives_logarithmic_growth() {
    let f = ClosedFormFunction::power(0.0, Interval::unit(), 1.0, 0.5).unwrap();
    let r = divergence_probe(&f, 0.25, 4.0, None).unwrap();
    assert_eq!(r.growth, Growth::Logarithmic);
    assert!(r.fitted_slope.abs() < 0.1, "{}", r.fitted_slope);
    assert!(r.monotone && r.plateau_free);

    let s = spec(CaseId::P1CriticalLog, 1.0, 0.5, 2.0);
    let r = divergence_probe(&make_counterexample(&s).unwrap(), 0.5, 2.0, None).unwrap();
    assert_eq!(r.growth, Growth::Logarithmic);
    assert!(r.monotone && r.plateau_free);
    let (e, fitted) = (r.log_exponent.unwrap(), r.fitted_log_exponent.unwrap());
    assert!(e > 0.0 && ((fitted - e) / e).abs() < 0.15, "{fitted} vs {e}");
}

#[test]
fn halfline_probes_dominate_lower_bound() {
    for s in [spec(CaseId::HalflineSub, 2.0, 0.25, 1.0), spec(CaseId::P1HalflineLow, 1.0, 0.5, 1.5)] {
        let f = make_counterexample(&s).unwrap();
        let r = divergence_probe(&f, s.alpha, s.eta, None).unwrap();
        assert_eq!(r.growth, Growth::HalfLine);
        assert!(r.monotone);
        let lb = r.halfline_lower_bound.as_ref().unwrap();
        for (n, l) in r.truncated_norm_power.iter().zip(lb) {
            assert!(n >= l, "{}: {n} < {l}", s.case_id.as_str());
        }
        assert!(r.fitted_slope < 0.0 && r.theoretical_exponent < 0.0);
    }
}

#[test]
fn probe_rejects_bounded_images_and_bad_schedules() {
    let f = ClosedFormFunction::power(0.0, Interval::unit(), 1.0, 0.3).unwrap();
    assert!(matches!(divergence_probe(&f, 0.25, 2.0, None), Err(FracError::Regime(_))));
    let g = make_counterexample(&spec(CaseId::BoundedSuperFinite, 2.0, 0.25, 8.0)).unwrap();
    assert!(divergence_probe(&g, 0.25, 8.0, Some(&[1e-3, 1e-2, 1e-4])).is_err());
    assert!(divergence_probe(&g, 0.25, 8.0, Some(&[1e-3, 1e-4])).is_err());
    assert!(divergence_probe(&g, 0.25, 0.5, None).is_err());
}

#[test]
fn probe_csv_columns() {
    let g = make_counterexample(&spec(CaseId::BoundedSuperFinite, 2.0, 0.25, 8.0)).unwrap();
    let r = divergence_probe(&g, 0.25, 8.0, None).unwrap();
    let mut out = Vec::new();
    r.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "eps,truncated_norm_power,log_eps,log_N,fitted_slope,theoretical_exponent");
    assert_eq!(lines.count(), r.eps.len());
}
