//! End-to-end classification and sweep behavior on the domain catalog.

use neumann_flux::closed_form::BoxSpec;
use neumann_flux::config::RunConfig;
use neumann_flux::geometry::DomainSpec;
use neumann_flux::sweeps::{
    classify_domain, limit_f_at_mu2, sector_study, strictness_witness, sweep_csv, sweep_f, LimitOutcome, Ternary,
    Verdict,
};

const PI: f64 = std::f64::consts::PI;

#[test]
fn square_classifies_as_equality_with_threshold() {
    let cfg = RunConfig::default();
    let spec = DomainSpec::square(1.0).unwrap();
    let cls = classify_domain(&spec, &cfg).unwrap();
    assert_eq!(cls.verdict, Verdict::Equality);
    assert_eq!(cls.in_class_f, Ternary::Yes);
    // half-lengths (1,1): m0 = 8 / (pi^2/4) = 32/pi^2
    let m0 = cls.m0.unwrap();
    assert!((m0 - 32.0 / (PI * PI)).abs() < 0.02 * m0, "m0 = {m0}");
    match cls.limit_f_at_mu2 {
        LimitOutcome::Value(v) => assert!((v - 8.0).abs() < 1e-9),
        other => panic!("unexpected limit {other:?}"),
    }
}

#[test]
fn disk_classifies_as_equality() {
    let cfg = RunConfig::default();
    let cls = classify_domain(&DomainSpec::disk(1.0, 32).unwrap(), &cfg).unwrap();
    assert_eq!(cls.verdict, Verdict::Equality);
    assert_eq!(cls.in_class_f, Ternary::Yes);
    let m0 = cls.m0.unwrap();
    assert!((m0 - 1.8535).abs() < 0.02 * m0, "m0 = {m0}");
}

#[test]
fn sub_equilateral_classifies_as_strict() {
    let cfg = RunConfig::default();
    let spec = DomainSpec::isosceles_triangle(PI / 4.0, 1.0).unwrap();
    let cls = classify_domain(&spec, &cfg).unwrap();
    assert_eq!(cls.verdict, Verdict::Strict);
    let c0 = cls.c0.unwrap();
    assert!(c0 < cls.mu2 * 0.99);
    // kappa1 is reported as c0 for strict domains
    assert_eq!(cls.kappa1, c0);
    assert_eq!(cls.in_class_f, Ternary::No);
    assert!(cls.m0.is_none());
    assert_eq!(cls.limit_f_at_mu2, LimitOutcome::DivergentNegative);
}

#[test]
fn equilateral_classifies_as_equality_with_exact_kappa() {
    let cfg = RunConfig::default();
    let cls = classify_domain(&DomainSpec::equilateral(2.0).unwrap(), &cfg).unwrap();
    assert_eq!(cls.verdict, Verdict::Equality);
    let exact = 4.0 * PI * PI / 9.0;
    assert!((cls.kappa1 - exact).abs() < 0.01 * exact, "kappa1 = {}", cls.kappa1);
    // triangles leave the positive-boundary class
    assert_eq!(cls.in_class_f, Ternary::No);
}

#[test]
fn pentagon_limit_matches_isoperimetric_half() {
    let cfg = RunConfig::default();
    let spec = DomainSpec::regular_polygon(5, 1.0).unwrap();
    match limit_f_at_mu2(&spec, &cfg).unwrap() {
        LimitOutcome::Value(v) => {
            // P^2/(2|O|) of a regular k-gon with circumradius 1 is 2k tan(pi/k)
            let reference = 2.0 * 5.0 * (PI / 5.0).tan();
            assert!((v - reference).abs() < 0.02 * reference, "{v} vs {reference}");
        }
        other => panic!("unexpected limit {other:?}"),
    }
}

#[test]
fn box_f_continues_positive_past_mu2_until_constrained_root() {
    // on the square the closed form stays finite across mu2 and first
    // vanishes at z0^2 (tan z0 = -z0), the next distinct constrained
    // eigenvalue
    let bx = BoxSpec::new(vec![1.0, 1.0]).unwrap();
    let z0sq = 2.02875783811043422357697112473f64.powi(2);
    let mu2 = bx.mu2();
    assert!(z0sq > mu2);
    for i in 0..20 {
        let c = mu2 * (1.0 + 0.01 * i as f64);
        if c < z0sq * 0.999 {
            assert!(bx.f_value_extended(c).unwrap() > 0.0, "c = {c}");
        }
    }
    for i in 1..=10 {
        let c = z0sq * (1.0 + 0.02 * i as f64);
        if c < (PI / 1.0).powi(2) * 0.999 {
            assert!(bx.f_value_extended(c).unwrap() < 0.0, "c = {c}");
        }
    }
}

#[test]
fn sweep_output_independent_of_execution_mode() {
    let spec = DomainSpec::equilateral(2.0).unwrap();
    let par = RunConfig { c_grid_size: 12, parallel: true, ..Default::default() };
    let ser = RunConfig { c_grid_size: 12, parallel: false, ..Default::default() };
    let (rp, _) = sweep_f(&spec, &par).unwrap();
    let (rs, _) = sweep_f(&spec, &ser).unwrap();
    assert_eq!(sweep_csv(&spec.id(), &rp, &par), sweep_csv(&spec.id(), &rs, &par));
}

#[test]
fn sector_rows_and_prop92_witness() {
    let cfg = RunConfig::default();
    let report = sector_study(&[1.0], &cfg).unwrap();
    assert!((report.alpha0 - 1.1748).abs() < 1e-3);
    let row = &report.rows[0];
    // below alpha0 the radial mode carries mu2 and the trial bound beats it
    assert!(row.strict_by_trial && row.strict_by_fem);
    assert_eq!(row.parity, neumann_flux::closed_form::ModeParity::Even);
    // there is an aperture above alpha0 with odd-only mu2 yet strict
    // kappa_1 < mu_2
    let witness = strictness_witness(&cfg).unwrap().expect("no witness found above alpha0");
    assert!(witness.alpha > report.alpha0);
    assert_eq!(witness.parity, neumann_flux::closed_form::ModeParity::Odd);
    assert!(witness.strict_by_fem);
    assert!(witness.kappa1_fem < witness.mu2);
}
