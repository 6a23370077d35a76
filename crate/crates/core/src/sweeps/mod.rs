//! Sweep orchestration: tabulate f(c) = c int_{bnd} u_c over c-grids,
//! through the closed forms where they exist and the FEM path elsewhere.

mod classify;
mod observe;
mod sector_study;

pub use classify::{classify_domain, classify_with_context, limit_f_at_mu2, DomainClassification, LimitOutcome, Ternary, Verdict};
pub use observe::{observation_suite, ObservationItem, ObservationLine, ObservationReport, ObsStatus};
pub use sector_study::{sector_study, strictness_witness, SectorReport, SectorRow};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{invalid, Error, Result};
use crate::extrapolate::richardson_h2;
use crate::fem::{assemble, Spectrum, SymmetricOperatorPair};
use crate::geometry::{triangulate, DomainSpec, Mesh};
use crate::par::map_items;

/// One row of a c-sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub c: f64,
    pub f_value: f64,
    pub boundary_integral: f64,
    pub boundary_min: f64,
    pub residual: f64,
    pub guard_band_hit: bool,
}

/// Which evaluation path produced a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepBackend {
    ClosedForm,
    Fem,
}

/// Geometric grid of `size` points in (1e-4 mu2, (1 - 1e-3) mu2).
pub fn default_grid(mu2: f64, size: usize) -> Vec<f64> {
    let lo = 1e-4 * mu2;
    let hi = (1.0 - 1e-3) * mu2;
    let ratio = (hi / lo).powf(1.0 / (size as f64 - 1.0));
    (0..size).map(|i| lo * ratio.powi(i as i32)).collect()
}

/// FEM data of one mesh level.
pub struct LevelData {
    pub mesh_nodes: usize,
    pub ops: SymmetricOperatorPair,
    pub mu: Spectrum,
    pub kappa: Spectrum,
}

/// Two consecutive refinement levels of one domain, ready for Richardson
/// extrapolation of any spectral quantity.
pub struct FemContext {
    pub spec: DomainSpec,
    pub coarse: LevelData,
    pub fine: LevelData,
}

impl FemContext {
    pub fn build(spec: &DomainSpec, cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let lp = spec.boundary_loop()?;
        let base = triangulate(&lp)?;
        let coarse_mesh = base.refine_to(cfg.target_nodes.div_ceil(4).max(120), cfg.node_cap / 4);
        let fine_mesh = coarse_mesh.refine();
        let coarse = Self::level(&coarse_mesh, cfg)?;
        let fine = Self::level(&fine_mesh, cfg)?;
        Ok(FemContext { spec: spec.clone(), coarse, fine })
    }

    fn level(mesh: &Mesh, cfg: &RunConfig) -> Result<LevelData> {
        let ops = assemble(mesh)?;
        let mu = ops.neumann_spectrum(cfg.eigen_count)?;
        let kappa = ops.kappa_spectrum(cfg.kappa_count)?;
        Ok(LevelData { mesh_nodes: mesh.node_count(), ops, mu, kappa })
    }

    /// Richardson-extrapolated Neumann eigenvalue.
    pub fn mu_extrapolated(&self, i: usize) -> f64 {
        richardson_h2(self.coarse.mu.values[i], self.fine.mu.values[i])
    }

    /// Richardson-extrapolated constrained eigenvalue.
    pub fn kappa_extrapolated(&self, i: usize) -> f64 {
        richardson_h2(self.coarse.kappa.values[i], self.fine.kappa.values[i])
    }

    pub fn mu2(&self) -> f64 {
        self.mu_extrapolated(1)
    }

    pub fn kappa1(&self) -> f64 {
        self.kappa_extrapolated(0)
    }
}

/// Sweep f over the grid with the FEM path on the given operators; guard-band
/// points are flagged, not solved, and per-point solver failures are recorded
/// without aborting the sweep.
pub fn sweep_f_fem(
    ops: &SymmetricOperatorPair,
    spectrum: &Spectrum,
    grid: &[f64],
    parallel: bool,
) -> Vec<SweepRecord> {
    let items: Vec<f64> = grid.to_vec();
    map_items(items, parallel, |c| match ops.solve_flux(c, Some(spectrum)) {
        Ok(sol) => SweepRecord {
            c,
            f_value: sol.f_value,
            boundary_integral: sol.boundary_integral,
            boundary_min: sol.boundary_min,
            residual: sol.residual,
            guard_band_hit: false,
        },
        Err(Error::NearEigenvalue { .. }) => SweepRecord {
            c,
            f_value: f64::NAN,
            boundary_integral: f64::NAN,
            boundary_min: f64::NAN,
            residual: f64::NAN,
            guard_band_hit: true,
        },
        Err(_) => SweepRecord {
            c,
            f_value: f64::NAN,
            boundary_integral: f64::NAN,
            boundary_min: f64::NAN,
            residual: f64::INFINITY,
            guard_band_hit: false,
        },
    })
}

/// Closed-form sweep for balls and boxes (boundary minimum from the profile
/// value on the boundary: constant for balls, the corner for boxes).
pub fn sweep_f_closed(spec: &DomainSpec, grid: &[f64]) -> Result<Vec<SweepRecord>> {
    match spec {
        DomainSpec::Ball { spec: ball, .. } => {
            let mut out = Vec::with_capacity(grid.len());
            for &c in grid {
                let f = ball.f_value(c)?;
                let profile = ball.flux_profile(c)?;
                let on_boundary = profile.eval(ball.radius());
                out.push(SweepRecord {
                    c,
                    f_value: f,
                    boundary_integral: f / c,
                    boundary_min: on_boundary,
                    residual: 0.0,
                    guard_band_hit: false,
                });
            }
            Ok(out)
        }
        DomainSpec::Box { spec: bx } => {
            let mut out = Vec::with_capacity(grid.len());
            for &c in grid {
                let f = bx.f_value(c)?;
                let sol = bx.flux_solution(c)?;
                out.push(SweepRecord {
                    c,
                    f_value: f,
                    boundary_integral: f / c,
                    boundary_min: sol.boundary_min(),
                    residual: 0.0,
                    guard_band_hit: false,
                });
            }
            Ok(out)
        }
        _ => Err(invalid(format!("no closed-form sweep for {}", spec.id()))),
    }
}

/// Sweep on the default grid, closed form when available, FEM otherwise.
/// Records arrive in ascending c.
pub fn sweep_f(spec: &DomainSpec, cfg: &RunConfig) -> Result<(Vec<SweepRecord>, SweepBackend)> {
    cfg.validate()?;
    match spec {
        DomainSpec::Ball { spec: ball, .. } => {
            let grid = default_grid(ball.mu2()?, cfg.c_grid_size);
            Ok((sweep_f_closed(spec, &grid)?, SweepBackend::ClosedForm))
        }
        DomainSpec::Box { spec: bx } => {
            let grid = default_grid(bx.mu2(), cfg.c_grid_size);
            Ok((sweep_f_closed(spec, &grid)?, SweepBackend::ClosedForm))
        }
        _ => {
            let ctx = FemContext::build(spec, &cfg.with_eigen_counts(cfg.eigen_count, 1))?;
            let grid = default_grid(ctx.fine.mu.values[1], cfg.c_grid_size);
            Ok((sweep_f_fem(&ctx.fine.ops, &ctx.fine.mu, &grid, cfg.parallel), SweepBackend::Fem))
        }
    }
}

/// The domain families exercised by the verification suites.
pub fn catalog() -> Vec<DomainSpec> {
    vec![
        DomainSpec::square(1.0).unwrap(),
        DomainSpec::disk(1.0, 32).unwrap(),
        DomainSpec::regular_polygon(5, 1.0).unwrap(),
        DomainSpec::rhombus(5.0 * std::f64::consts::PI / 12.0, 1.0).unwrap(),
        DomainSpec::isosceles_triangle(std::f64::consts::PI / 4.0, 1.0).unwrap(),
        DomainSpec::isosceles_triangle(0.45 * std::f64::consts::PI, 1.0).unwrap(),
        DomainSpec::ellipse(1.25, 1.0, 32).unwrap(),
        DomainSpec::equilateral(2.0).unwrap(),
    ]
}

/// Fixed CSV header for sweep exports.
pub const SWEEP_CSV_HEADER: &str = "domain_id,c,f_value,boundary_integral,boundary_min,residual,guard_band_hit";

/// Serialize sweep records; floats carry 17 significant digits.
pub fn sweep_csv(domain_id: &str, records: &[SweepRecord], cfg: &RunConfig) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    writeln!(out, "# schema neumann-flux/sweep-csv/v1").unwrap();
    writeln!(out, "# config {}", serde_json::to_string(cfg).unwrap()).unwrap();
    writeln!(out, "{SWEEP_CSV_HEADER}").unwrap();
    for r in records {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            domain_id, r.c, r.f_value, r.boundary_integral, r.boundary_min, r.residual, r.guard_band_hit
        )
        .unwrap();
    }
    out
}

/// True when the ascending grid shows f > 0 up to some index and f < 0 after
/// (guard hits skipped); returns the bracketing pair when a change exists.
pub fn first_sign_change(records: &[SweepRecord]) -> Option<(f64, f64)> {
    let mut prev: Option<&SweepRecord> = None;
    for r in records.iter().filter(|r| !r.guard_band_hit && r.f_value.is_finite()) {
        if let Some(p) = prev {
            if p.f_value > 0.0 && r.f_value < 0.0 {
                return Some((p.c, r.c));
            }
        }
        prev = Some(r);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_geometric_and_in_range() {
        let g = default_grid(10.0, 50);
        assert_eq!(g.len(), 50);
        assert!((g[0] - 1e-3).abs() < 1e-12);
        assert!((g[49] - 9.99).abs() < 1e-10);
        let r1 = g[1] / g[0];
        let r2 = g[25] / g[24];
        assert!((r1 - r2).abs() < 1e-10);
    }

    #[test]
    fn closed_form_sweeps_are_positive_on_equality_domains() {
        let cfg = RunConfig { c_grid_size: 30, ..Default::default() };
        let (records, backend) = sweep_f(&DomainSpec::disk(1.0, 32).unwrap(), &cfg).unwrap();
        assert_eq!(backend, SweepBackend::ClosedForm);
        assert!(records.iter().all(|r| r.f_value > 0.0));
        assert!(records.windows(2).all(|w| w[1].f_value < w[0].f_value));
        let (records, _) = sweep_f(&DomainSpec::square(1.0).unwrap(), &cfg).unwrap();
        assert!(records.iter().all(|r| r.f_value > 0.0 && r.boundary_min > 0.0));
    }

    #[test]
    fn csv_shape_and_determinism() {
        let cfg = RunConfig { c_grid_size: 10, ..Default::default() };
        let spec = DomainSpec::square(1.0).unwrap();
        let (records, _) = sweep_f(&spec, &cfg).unwrap();
        let a = sweep_csv(&spec.id(), &records, &cfg);
        let (records2, _) = sweep_f(&spec, &cfg).unwrap();
        let b = sweep_csv(&spec.id(), &records2, &cfg);
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert!(lines.next().unwrap().starts_with("# schema"));
        assert!(lines.next().unwrap().starts_with("# config"));
        assert_eq!(lines.next().unwrap(), SWEEP_CSV_HEADER);
        assert_eq!(a.lines().count(), 3 + 10);
    }
}
