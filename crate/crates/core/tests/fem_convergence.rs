//! Mesh-convergence checks of the FEM path against the closed forms:
//! O(h^2) rates for the flux functional, eigenvalue accuracy under
//! Richardson extrapolation, and solution diagnostics across levels.

use neumann_flux::closed_form::{BallSpec, BoxSpec};
use neumann_flux::extrapolate::richardson_h2;
use neumann_flux::fem::assemble;
use neumann_flux::geometry::{triangulate, DomainSpec};

fn ops_at(spec: &DomainSpec, levels: u32) -> neumann_flux::fem::SymmetricOperatorPair {
    let mesh = triangulate(&spec.boundary_loop().unwrap()).unwrap().refine_levels(levels);
    assemble(&mesh).unwrap()
}

#[test]
fn disk_flux_matches_ball_closed_form() {
    let ball = BallSpec::new(2, 1.0).unwrap();
    let exact = ball.f_value(1.0).unwrap();
    // polygonal geometry converges O(h^2) alongside the elements
    let spec = DomainSpec::disk(1.0, 32).unwrap();
    let fine = ops_at(&spec, 4); // 32 * 2^4 boundaryical segments, ~8k nodes
    let sol = fine.solve_flux(1.0, None).unwrap();
    let err = (sol.f_value - exact).abs() / exact;
    assert!(err < 0.01, "relative error {err:.3e}");
}

#[test]
fn box_flux_convergence_rate() {
    let bx = BoxSpec::new(vec![0.5, 0.5]).unwrap();
    let exact = bx.f_value(1.0).unwrap();
    let spec = DomainSpec::square(0.5).unwrap();
    let mut errs = Vec::new();
    for levels in [3u32, 4] {
        let ops = ops_at(&spec, levels);
        let sol = ops.solve_flux(1.0, None).unwrap();
        errs.push((sol.f_value - exact).abs() / exact);
    }
    assert!(errs[0] < 1e-2 && errs[1] < 0.25e-2);
    let rate = (errs[0] / errs[1]).log2();
    assert!((1.6..=2.4).contains(&rate), "rate {rate:.2}");
}

#[test]
fn richardson_extrapolated_spectra() {
    // square side 2: mu = (pi/2)^2 (k^2 + l^2)
    let spec = DomainSpec::square(1.0).unwrap();
    let coarse = ops_at(&spec, 4).neumann_spectrum(4).unwrap();
    let fine = ops_at(&spec, 5).neumann_spectrum(4).unwrap();
    let mu2 = richardson_h2(coarse.values[1], fine.values[1]);
    let exact = std::f64::consts::PI.powi(2) / 4.0;
    assert!((mu2 - exact).abs() < 1e-4 * exact, "mu2 = {mu2}");
    let mu4 = richardson_h2(coarse.values[3], fine.values[3]);
    assert!((mu4 - 2.0 * exact).abs() < 1e-3 * 2.0 * exact, "mu4 = {mu4}");
}

#[test]
fn diagnostics_hold_across_levels() {
    let spec = DomainSpec::disk(1.0, 32).unwrap();
    for levels in [2u32, 3] {
        let ops = ops_at(&spec, levels);
        let sol = ops.solve_flux(2.0, None).unwrap();
        let diag = ops.norm_checks(&sol);
        assert!(diag.pass, "level {levels}: green {:.2e} residual {:.2e}", diag.green_identity_rel, diag.residual);
        assert!((diag.boundary_integral_by_edges - sol.boundary_integral).abs() <= 1e-12 * sol.boundary_integral.abs());
    }
}

#[test]
fn duality_identity_on_the_square() {
    // m kappa(m) = f(kappa(m)) for the rank-one eigensolve vs the closed form
    let spec = DomainSpec::square(0.5).unwrap();
    let bx = BoxSpec::new(vec![0.5, 0.5]).unwrap();
    let coarse = ops_at(&spec, 4);
    let fine = ops_at(&spec, 5);
    for m in [1.0f64, 2.0] {
        let (vc, _) = coarse.kappa_of_m(m).unwrap();
        let (vf, _) = fine.kappa_of_m(m).unwrap();
        let k = richardson_h2(vc, vf);
        let f = bx.f_value(k).unwrap();
        let rel = (m * k - f).abs() / (m * k);
        assert!(rel <= 1e-3, "m = {m}: relative defect {rel:.2e}");
    }
}

#[test]
fn mesh_export_is_deterministic_and_wellformed() {
    let spec = DomainSpec::regular_polygon(5, 1.0).unwrap();
    let mesh = triangulate(&spec.boundary_loop().unwrap()).unwrap().refine_levels(2);
    let a = mesh.export_text();
    let b = mesh.export_text();
    assert_eq!(a, b);
    let header: Vec<usize> = a.lines().next().unwrap().split(' ').map(|t| t.parse().unwrap()).collect();
    assert_eq!(header[0], mesh.node_count());
    assert_eq!(header[1], mesh.triangle_count());
    assert_eq!(header[2], mesh.boundary_edges.len());
}
