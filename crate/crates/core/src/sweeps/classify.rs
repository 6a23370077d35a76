//! Domain classification by the sign structure of f(c): equality
//! (kappa_1 = mu_2, f positive on all of (0, mu_2)) versus strict
//! (kappa_1 < mu_2, f changing sign at c_0 = kappa_1), plus the class
//! membership "u_c > 0 on the boundary" and the insulation breaking
//! threshold m_0 = lim_{c->mu2} f / mu_2 for equality domains.

use serde::Serialize;

use super::{default_grid, first_sign_change, sweep_f_closed, sweep_f_fem, FemContext, SweepRecord};
use crate::config::RunConfig;
use crate::error::Result;
use crate::extrapolate::{dyadic_limit, richardson_h2};
use crate::geometry::DomainSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// kappa_1 = mu_2 within mesh tolerance; f positive on the whole grid.
    Equality,
    /// f changes sign at c_0 < mu_2.
    Strict,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ternary {
    Yes,
    No,
    Inconclusive,
}

/// One-sided limit of f at mu_2, or the signature of the Fredholm
/// obstruction (f blowing up like -(mu2 - c)^{-1}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum LimitOutcome {
    Value(f64),
    DivergentNegative,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainClassification {
    pub domain_id: String,
    pub mu2: f64,
    pub kappa1: f64,
    /// Supremum of c with f > 0 on (0, c); present when a sign change exists.
    pub c0: Option<f64>,
    pub verdict: Verdict,
    pub in_class_f: Ternary,
    /// Breaking threshold lim f / mu2; only meaningful for equality domains.
    pub m0: Option<f64>,
    pub limit_f_at_mu2: LimitOutcome,
}

/// Closed-form one-sided limit where one exists.
fn closed_form_limit(spec: &DomainSpec) -> Option<Result<f64>> {
    match spec {
        DomainSpec::Ball { spec: ball, .. } => Some(ball.limit_f_at_mu2()),
        DomainSpec::Box { spec: bx } => Some(Ok(bx.limit_at_mu2())),
        DomainSpec::Equilateral { spec: tri } => Some(Ok(tri.f_at_mu2())),
        _ => None,
    }
}

/// FEM limit: per level, approach that level's own discrete mu_2 (where the
/// discrete pole sits) dyadically with a quadratic fit, then Richardson the
/// two intercepts. Divergence is read off the fine level's sample ratios.
pub(crate) fn fem_limit(ctx: &FemContext) -> Result<LimitOutcome> {
    let mut intercepts = Vec::with_capacity(2);
    let mut fine_diverges = false;
    let mut fine_last_sample = f64::NAN;
    for (idx, level) in [&ctx.coarse, &ctx.fine].into_iter().enumerate() {
        let mu2_h = level.mu.values[1];
        let fit = dyadic_limit(mu2_h, 4..=9, 2, |c| Ok(level.ops.solve_flux(c, None)?.f_value))?;
        if idx == 1 {
            fine_diverges = fit.diverges();
            fine_last_sample = *fit.samples.last().unwrap();
        }
        intercepts.push(fit.intercept);
    }
    if fine_diverges {
        if fine_last_sample < 0.0 {
            return Ok(LimitOutcome::DivergentNegative);
        }
        return Ok(LimitOutcome::Inconclusive);
    }
    Ok(LimitOutcome::Value(richardson_h2(intercepts[0], intercepts[1])))
}

/// One-sided limit of f at mu_2 for any catalog domain.
pub fn limit_f_at_mu2(spec: &DomainSpec, cfg: &RunConfig) -> Result<LimitOutcome> {
    if let Some(value) = closed_form_limit(spec) {
        return Ok(LimitOutcome::Value(value?));
    }
    let ctx = FemContext::build(spec, &cfg.with_eigen_counts(2, 1))?;
    fem_limit(&ctx)
}

fn bisect_sign_change<F>(mut lo: f64, mut hi: f64, f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    // f(lo) > 0 > f(hi); bisect to relative width 1e-6
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Classify one planar domain. The flux sweep runs through the closed form
/// for disks and rectangles and through FEM otherwise; eigenvalues always
/// come from the FEM pencil, Richardson-extrapolated over two levels.
pub fn classify_domain(spec: &DomainSpec, cfg: &RunConfig) -> Result<DomainClassification> {
    cfg.validate()?;
    let ctx = FemContext::build(spec, cfg)?;
    classify_with_context(&ctx, cfg)
}

/// Classification on an already-built two-level context.
pub fn classify_with_context(ctx: &FemContext, cfg: &RunConfig) -> Result<DomainClassification> {
    let spec = &ctx.spec;
    let kappa1_fem = ctx.kappa1();
    let mu2_fem = ctx.mu2();

    // sweep records and a bisectable f
    enum FPath<'a> {
        Ball(&'a crate::closed_form::BallSpec),
        Box_(&'a crate::closed_form::BoxSpec),
        Fem,
    }
    let (records, fpath, mu2_for_grid): (Vec<SweepRecord>, FPath, f64) = match spec {
        DomainSpec::Ball { spec: ball, .. } => {
            let mu2 = ball.mu2()?;
            (sweep_f_closed(spec, &default_grid(mu2, cfg.c_grid_size))?, FPath::Ball(ball), mu2)
        }
        DomainSpec::Box { spec: bx } => {
            let mu2 = bx.mu2();
            (sweep_f_closed(spec, &default_grid(mu2, cfg.c_grid_size))?, FPath::Box_(bx), mu2)
        }
        _ => {
            let mu2_h = ctx.fine.mu.values[1];
            let grid = default_grid(mu2_h, cfg.c_grid_size);
            (sweep_f_fem(&ctx.fine.ops, &ctx.fine.mu, &grid, cfg.parallel), FPath::Fem, mu2_h)
        }
    };

    let eval_f = |c: f64| -> Result<f64> {
        match &fpath {
            FPath::Ball(ball) => ball.f_value(c),
            FPath::Box_(bx) => bx.f_value(c),
            FPath::Fem => Ok(ctx.fine.ops.solve_flux(c, Some(&ctx.fine.mu))?.f_value),
        }
    };

    let sign_change = first_sign_change(&records);
    let (verdict, c0, kappa1) = match sign_change {
        Some((lo, hi)) => {
            let c0 = bisect_sign_change(lo, hi, eval_f)?;
            if c0 < mu2_for_grid * (1.0 - cfg.mesh_tolerance) {
                (Verdict::Strict, Some(c0), c0)
            } else {
                (Verdict::Inconclusive, Some(c0), kappa1_fem)
            }
        }
        None => {
            if (kappa1_fem - mu2_fem).abs() <= cfg.mesh_tolerance * mu2_fem {
                (Verdict::Equality, None, kappa1_fem)
            } else {
                (Verdict::Inconclusive, None, kappa1_fem)
            }
        }
    };

    let solved: Vec<&SweepRecord> = records
        .iter()
        .filter(|r| !r.guard_band_hit && r.f_value.is_finite())
        .collect();
    let in_class_f = if solved.is_empty() {
        Ternary::Inconclusive
    } else if solved.iter().all(|r| r.boundary_min > 0.0) {
        Ternary::Yes
    } else {
        Ternary::No
    };

    let limit = match closed_form_limit(spec) {
        Some(v) => LimitOutcome::Value(v?),
        None => fem_limit(&ctx)?,
    };
    let m0 = match (verdict, limit) {
        (Verdict::Equality, LimitOutcome::Value(l)) => Some(l / mu2_fem),
        _ => None,
    };

    Ok(DomainClassification {
        domain_id: spec.id(),
        mu2: mu2_fem,
        kappa1,
        c0,
        verdict,
        in_class_f,
        m0,
        limit_f_at_mu2: limit,
    })
}

impl DomainClassification {
    /// Sign-structure consistency of the verdict against a sweep.
    pub fn consistent_with(&self, records: &[SweepRecord]) -> bool {
        match self.verdict {
            Verdict::Equality => records
                .iter()
                .filter(|r| !r.guard_band_hit && r.f_value.is_finite())
                .all(|r| r.f_value > 0.0),
            Verdict::Strict => {
                let c0 = match self.c0 {
                    Some(c0) => c0,
                    None => return false,
                };
                records
                    .iter()
                    .filter(|r| !r.guard_band_hit && r.f_value.is_finite())
                    .all(|r| {
                        if r.c < c0 * (1.0 - 1e-4) {
                            r.f_value > 0.0
                        } else if r.c > c0 * (1.0 + 1e-4) {
                            r.f_value < 0.0
                        } else {
                            true
                        }
                    })
            }
            Verdict::Inconclusive => true,
        }
    }
}
