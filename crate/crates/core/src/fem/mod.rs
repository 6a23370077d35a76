//! P1 finite elements for the flux problem and the associated spectra.
//!
//! `assemble` produces the stiffness form K (exact per-triangle gradients),
//! the consistent mass form M, and the boundary load b_i = int_{bnd} phi_i
//! (trapezoid per edge, exact for P1 traces). The flux solver factors the
//! shifted pencil K - cM with a profile LDL^T and polishes with iterative
//! refinement until the residual is at rounding level.

pub mod eigen;

use crate::error::{invalid, Error, Result};
use crate::geometry::Mesh;
use crate::linalg::{axpy, dot, norm2, rcm_order, shifted_combination, CsrMatrix, SkylineFactor};

pub use eigen::Spectrum;

/// Relative guard band around computed eigenvalues inside which the flux
/// problem is refused (the caller extrapolates instead).
pub const EIGENVALUE_GUARD_REL: f64 = 1e-6;

/// Assembled symmetric forms of one mesh.
#[derive(Debug, Clone)]
pub struct SymmetricOperatorPair {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    /// b_i = int_{boundary} phi_i dsigma
    pub boundary_load: Vec<f64>,
    pub mesh: Mesh,
    boundary_nodes: Vec<usize>,
    ordering: Vec<usize>,
    /// -shift used for the spectral factorizations, scaled like mu2
    shift_scale: f64,
}

/// Exact P1 element matrices on one mesh.
pub fn assemble(mesh: &Mesh) -> Result<SymmetricOperatorPair> {
    let n = mesh.node_count();
    let mut k_trip = Vec::with_capacity(9 * mesh.triangle_count());
    let mut m_trip = Vec::with_capacity(9 * mesh.triangle_count());
    for (idx, t) in mesh.triangles.iter().enumerate() {
        let p = [mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]];
        let area = 0.5
            * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1])
                - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
        if area <= 1e-14 {
            return Err(Error::DegenerateTriangle { index: idx, area });
        }
        // gradient of the barycentric basis: rotated opposite edges / (2 area)
        let grads = [
            [(p[1][1] - p[2][1]) / (2.0 * area), (p[2][0] - p[1][0]) / (2.0 * area)],
            [(p[2][1] - p[0][1]) / (2.0 * area), (p[0][0] - p[2][0]) / (2.0 * area)],
            [(p[0][1] - p[1][1]) / (2.0 * area), (p[1][0] - p[0][0]) / (2.0 * area)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                let kij = area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
                k_trip.push((t[i], t[j], kij));
                let mij = if i == j { area / 6.0 } else { area / 12.0 };
                m_trip.push((t[i], t[j], mij));
            }
        }
    }
    let stiffness = CsrMatrix::from_triplets(n, &k_trip);
    let mass = CsrMatrix::from_triplets(n, &m_trip);
    let mut boundary_load = vec![0.0; n];
    for e in &mesh.boundary_edges {
        let p = mesh.nodes[e[0]];
        let q = mesh.nodes[e[1]];
        let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
        boundary_load[e[0]] += 0.5 * len;
        boundary_load[e[1]] += 0.5 * len;
    }
    let ordering = rcm_order(&stiffness);
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &mesh.nodes {
        xmin = xmin.min(p[0]);
        xmax = xmax.max(p[0]);
        ymin = ymin.min(p[1]);
        ymax = ymax.max(p[1]);
    }
    let diam2 = (xmax - xmin).powi(2) + (ymax - ymin).powi(2);
    let shift_scale = std::f64::consts::PI.powi(2) / diam2;
    Ok(SymmetricOperatorPair {
        stiffness,
        mass,
        boundary_load,
        boundary_nodes: mesh.boundary_nodes(),
        mesh: mesh.clone(),
        ordering,
        shift_scale,
    })
}

/// Discrete flux solution for one value of c.
#[derive(Debug, Clone)]
pub struct FluxSolution {
    pub c: f64,
    pub u: Vec<f64>,
    /// int_{boundary} u = b^T u
    pub boundary_integral: f64,
    /// f(c) = c * boundary_integral
    pub f_value: f64,
    /// min of u over boundary nodes
    pub boundary_min: f64,
    /// ||(K - cM) u + b|| / ||b||
    pub residual: f64,
}

/// Recomputed consistency diagnostics of a flux solution.
#[derive(Debug, Clone)]
pub struct SolutionDiagnostics {
    pub residual: f64,
    /// boundary integral re-summed edge by edge (trapezoid along the loop)
    pub boundary_integral_by_edges: f64,
    /// | c u^T M u - u^T K u - b^T u | / scale
    pub green_identity_rel: f64,
    pub pass: bool,
}

impl SymmetricOperatorPair {
    pub fn n(&self) -> usize {
        self.boundary_load.len()
    }

    pub fn boundary_nodes(&self) -> &[usize] {
        &self.boundary_nodes
    }

    pub(crate) fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    pub(crate) fn shift_scale(&self) -> f64 {
        self.shift_scale
    }

    /// Solve (K - cM) u = -b by profile LDL^T plus iterative refinement.
    /// `guard` carries already-computed eigenvalues; c inside the relative
    /// guard band of any of them is refused.
    pub fn solve_flux(&self, c: f64, guard: Option<&Spectrum>) -> Result<FluxSolution> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(invalid(format!("c must be positive and finite, got {c}")));
        }
        if let Some(sp) = guard {
            let scale = sp.values.get(1).copied().unwrap_or(self.shift_scale);
            for &mu in &sp.values {
                if (c - mu).abs() < EIGENVALUE_GUARD_REL * scale {
                    return Err(Error::NearEigenvalue { c, eigenvalue: mu });
                }
            }
        }
        let a = shifted_combination(&self.stiffness, &self.mass, c);
        let factor = SkylineFactor::factor(&a, &self.ordering)?;
        let b = &self.boundary_load;
        let bnorm = norm2(b);
        let rhs: Vec<f64> = b.iter().map(|v| -v).collect();
        let resid = |u: &[f64]| -> Vec<f64> {
            let au = a.matvec_alloc(u);
            rhs.iter().zip(au).map(|(r, v)| r - v).collect()
        };
        // iterative refinement keeping the best iterate; the factorization
        // alone loses digits when c sits between clustered eigenvalues
        let mut u = factor.solve(&rhs);
        let mut r = resid(&u);
        let mut residual = norm2(&r);
        for _ in 0..4 {
            if residual <= 1e-13 * bnorm {
                break;
            }
            let du = factor.solve(&r);
            let mut candidate = u.clone();
            axpy(1.0, &du, &mut candidate);
            let r2 = resid(&candidate);
            let n2 = norm2(&r2);
            if n2 < residual {
                u = candidate;
                r = r2;
                residual = n2;
            } else {
                break;
            }
        }
        let residual = residual / bnorm;
        if residual > 1e-8 {
            // near the kernel (c -> 0) the solution is ~|b|/c large and the
            // plain residual floor scales with it; backward error decides
            let row_norm = (0..a.n)
                .map(|i| a.values[a.row_ptr[i]..a.row_ptr[i + 1]].iter().map(|v| v.abs()).sum::<f64>())
                .fold(0.0f64, f64::max);
            let unorm = norm2(&u);
            let backward = residual * bnorm / (bnorm + row_norm * unorm);
            if backward > 1e-12 {
                return Err(Error::ConvergenceFailure { what: format!("flux solve at c = {c}"), residual });
            }
        }
        let boundary_integral = dot(b, &u);
        let boundary_min = self
            .boundary_nodes
            .iter()
            .map(|&i| u[i])
            .fold(f64::INFINITY, f64::min);
        Ok(FluxSolution { c, u, boundary_integral, f_value: c * boundary_integral, boundary_min, residual })
    }

    /// b^T v for the eigenvector at `index`, maximized over an orthonormal
    /// basis of its numerical eigenspace (eigenvalues grouped at relative
    /// 1e-6); the solvability test for c equal to that eigenvalue.
    pub fn eigenfunction_boundary_mean(&self, spectrum: &Spectrum, index: usize) -> f64 {
        let lambda = spectrum.values[index];
        let scale = lambda.abs().max(spectrum.values.last().copied().unwrap_or(1.0).abs() * 1e-9);
        let mut best = 0.0f64;
        for (j, &v) in spectrum.values.iter().enumerate() {
            if (v - lambda).abs() <= 1e-6 * scale.max(v.abs()) {
                let m = dot(&self.boundary_load, &spectrum.vectors[j]).abs();
                best = best.max(m);
            }
        }
        best
    }

    /// Recompute the residual, the boundary integral by edge-loop trapezoid
    /// summation, and the Green identity c u^T M u - u^T K u - b^T u = 0.
    pub fn norm_checks(&self, sol: &FluxSolution) -> SolutionDiagnostics {
        let a = shifted_combination(&self.stiffness, &self.mass, sol.c);
        let mut r = a.matvec_alloc(&sol.u);
        for (ri, bi) in r.iter_mut().zip(&self.boundary_load) {
            *ri += bi;
        }
        let residual = norm2(&r) / norm2(&self.boundary_load);
        let mut by_edges = 0.0;
        for e in &self.mesh.boundary_edges {
            let p = self.mesh.nodes[e[0]];
            let q = self.mesh.nodes[e[1]];
            let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
            by_edges += 0.5 * len * (sol.u[e[0]] + sol.u[e[1]]);
        }
        let umu = self.mass.bilinear(&sol.u, &sol.u);
        let uku = self.stiffness.bilinear(&sol.u, &sol.u);
        let bu = dot(&self.boundary_load, &sol.u);
        let scale = (sol.c * umu).abs().max(uku.abs()).max(bu.abs()).max(1e-300);
        let green = (sol.c * umu - uku - bu).abs() / scale;
        SolutionDiagnostics {
            residual,
            boundary_integral_by_edges: by_edges,
            green_identity_rel: green,
            pass: residual <= 1e-8 && green <= 1e-8,
        }
    }
}
