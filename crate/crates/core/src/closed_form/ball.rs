//! The flux problem on balls B_R in R^n.
//!
//! The unique radial solution for c below the first nonzero Neumann
//! eigenvalue is u_c(r) = a_c r^{1 - n/2} J_{n/2 - 1}(sqrt(c) r), with a_c
//! fixed by du/dr(R) = -1. Its boundary functional reduces to a quotient of
//! Bessel values,
//!     f(c) = (n^2 omega_n R^{n-2} / 2) * z J_{s-1}(z) / (s J_s(z)),
//! with z = sqrt(c) R and s = n/2, and mu2(B_R) = (p/R)^2 where p is the
//! first positive root of z J_{n/2}'(z) - (n-2)/2 J_{n/2}(z).

use crate::bessel::{bessel_j_any, ln_gamma, BesselOrder};
use crate::error::{invalid, require_finite, Error, Result};
use crate::extrapolate::dyadic_limit;
use crate::roots::{bisect, scan_bracket};

/// Relative width of the rejected band around mu2 where the denominator
/// J_s(z) approaches its controlling zero.
const MU2_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    dim: u32,
    radius: f64,
}

impl BallSpec {
    pub fn new(dim: u32, radius: f64) -> Result<Self> {
        if dim < 2 {
            return Err(invalid(format!("ball dimension must be >= 2, got {dim}")));
        }
        require_finite("radius", radius)?;
        if radius <= 0.0 {
            return Err(invalid(format!("radius must be positive, got {radius}")));
        }
        Ok(BallSpec { dim, radius })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// omega_n = pi^{n/2} / Gamma(n/2 + 1), the unit-ball volume.
    pub fn unit_ball_volume(&self) -> f64 {
        let half_n = self.dim as f64 / 2.0;
        (half_n * std::f64::consts::PI.ln() - ln_gamma(half_n + 1.0)).exp()
    }

    pub fn volume(&self) -> f64 {
        self.unit_ball_volume() * self.radius.powi(self.dim as i32)
    }

    pub fn perimeter(&self) -> f64 {
        self.dim as f64 * self.unit_ball_volume() * self.radius.powi(self.dim as i32 - 1)
    }

    pub fn isoperimetric_ratio(&self) -> f64 {
        self.perimeter() * self.perimeter() / self.volume()
    }

    /// First nonzero Neumann eigenvalue (p/R)^2, p the first positive root
    /// of z J_{n/2}'(z) - (n-2)/2 J_{n/2}(z) = 0.
    pub fn mu2(&self) -> Result<f64> {
        let p = self.mu2_bessel_root()?;
        Ok((p / self.radius) * (p / self.radius))
    }

    /// The root p itself (radius-independent).
    pub fn mu2_bessel_root(&self) -> Result<f64> {
        let s = self.dim as f64 / 2.0;
        let coef = (self.dim as f64 - 2.0) / 2.0;
        let g = |z: f64| {
            z * crate::bessel::bessel_j_derivative(BesselOrder::new(s).unwrap(), z).unwrap_or(f64::NAN)
                - coef * bessel_j_any(s, z)
        };
        let bracket = scan_bracket(&g, 1e-3, 4.0 * s + 20.0, 0.1, "mu2 characteristic function")?;
        Ok(bisect(&g, bracket, 1e-13))
    }

    fn check_c(&self, c: f64) -> Result<f64> {
        require_finite("c", c)?;
        let mu2 = self.mu2()?;
        if c <= 0.0 || c >= mu2 {
            return Err(invalid(format!("c must lie in (0, mu2) = (0, {mu2}), got {c}")));
        }
        if (mu2 - c).abs() <= MU2_GUARD * mu2 {
            return Err(Error::NearEigenvalue { c, eigenvalue: mu2 });
        }
        Ok(mu2)
    }

    /// Radial profile r -> u_c(r) of the flux solution.
    pub fn flux_profile(&self, c: f64) -> Result<RadialFluxProfile> {
        self.check_c(c)?;
        let n = self.dim as f64;
        let s = n / 2.0 - 1.0; // order of the radial Bessel factor
        let sq = c.sqrt();
        let z = sq * self.radius;
        // a_c [ (1 - n/2) R^{-n/2} J_s(z) + R^{1-n/2} sqrt(c) J_s'(z) ] = -1
        let jsp = if s >= 1.0 && z >= s {
            bessel_j_any(s - 1.0, z) - s * bessel_j_any(s, z) / z
        } else {
            -bessel_j_any(s + 1.0, z) + s * bessel_j_any(s, z) / z
        };
        let denom = (1.0 - n / 2.0) * self.radius.powf(-n / 2.0) * bessel_j_any(s, z)
            + self.radius.powf(1.0 - n / 2.0) * sq * jsp;
        Ok(RadialFluxProfile { dim: self.dim, c, coeff: -1.0 / denom })
    }

    /// f(c) = c * int_{boundary} u_c, from the Bessel-quotient closed form.
    pub fn f_value(&self, c: f64) -> Result<f64> {
        self.check_c(c)?;
        let n = self.dim as f64;
        let s = n / 2.0;
        let z = c.sqrt() * self.radius;
        let front = n * n * self.unit_ball_volume() * self.radius.powi(self.dim as i32 - 2) / 2.0;
        Ok(front * z * bessel_j_any(s - 1.0, z) / (s * bessel_j_any(s, z)))
    }

    /// Same functional through the derivative form of the quotient,
    /// f = (n^2 omega_n R^{n-2}/2) J_{s-1}(z) / (J_{s-1}(z) - J_s'(z));
    /// an independent evaluation path used for cross-checking.
    pub fn f_value_via_derivative(&self, c: f64) -> Result<f64> {
        self.check_c(c)?;
        let n = self.dim as f64;
        let s = n / 2.0;
        let z = c.sqrt() * self.radius;
        let jsm1 = bessel_j_any(s - 1.0, z);
        let jsp = crate::bessel::bessel_j_derivative(BesselOrder::new(s)?, z)?;
        let front = n * n * self.unit_ball_volume() * self.radius.powi(self.dim as i32 - 2) / 2.0;
        Ok(front * jsm1 / (jsm1 - jsp))
    }

    /// One-sided limit of f at mu2 by dyadic extrapolation,
    /// c = mu2 (1 - 2^-k), k = 6..12, quadratic fit in (mu2 - c).
    pub fn limit_f_at_mu2(&self) -> Result<f64> {
        let mu2 = self.mu2()?;
        Ok(dyadic_limit(mu2, 6..=12, 2, |c| self.f_value(c))?.intercept)
    }
}

/// Immutable radial evaluation handle for one (ball, c) pair.
#[derive(Debug, Clone, Copy)]
pub struct RadialFluxProfile {
    dim: u32,
    c: f64,
    coeff: f64,
}

impl RadialFluxProfile {
    /// u_c(r) = a_c r^{1-n/2} J_{n/2-1}(sqrt(c) r); the removable 0/0 at the
    /// origin is evaluated from the series leading term.
    pub fn eval(&self, r: f64) -> f64 {
        let n = self.dim as f64;
        let s = n / 2.0 - 1.0;
        let sq = self.c.sqrt();
        if r < 1e-300 {
            // r^{1-n/2} J_s(sqrt(c) r) -> (sqrt(c)/2)^s / Gamma(s+1)
            return self.coeff * (s * (sq / 2.0).ln() - ln_gamma(s + 1.0)).exp();
        }
        self.coeff * r.powf(1.0 - n / 2.0) * bessel_j_any(s, sq * r)
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;
    const JP11_SQ: f64 = 3.38995771667188872686449092747;

    #[test]
    fn geometry_factors() {
        let b2 = BallSpec::new(2, 1.0).unwrap();
        assert!((b2.volume() - PI).abs() < 1e-14);
        assert!((b2.perimeter() - 2.0 * PI).abs() < 1e-14);
        let b3 = BallSpec::new(3, 2.0).unwrap();
        assert!((b3.volume() - 4.0 / 3.0 * PI * 8.0).abs() < 1e-12);
        assert!((b3.perimeter() - 4.0 * PI * 4.0).abs() < 1e-12);
        assert!(BallSpec::new(1, 1.0).is_err());
        assert!(BallSpec::new(2, -1.0).is_err());
    }

    #[test]
    fn mu2_of_disk_is_squared_derivative_root() {
        let b = BallSpec::new(2, 1.0).unwrap();
        let mu2 = b.mu2().unwrap();
        assert!((mu2 - JP11_SQ).abs() < 1e-10);
        assert!((mu2 - 1.8412_f64.powi(2)).abs() < 1e-3);
        // scaling: mu2(B_R) = mu2(B_1)/R^2
        let b2 = BallSpec::new(2, 2.0).unwrap();
        assert!((b2.mu2().unwrap() - mu2 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn mu2_root_satisfies_recurrence_form() {
        // z J_{n/2-1}(z) = (n-1) J_{n/2}(z) at the root, n = 3
        let b = BallSpec::new(3, 1.0).unwrap();
        let p = b.mu2_bessel_root().unwrap();
        let lhs = p * bessel_j_any(0.5, p);
        let rhs = 2.0 * bessel_j_any(1.5, p);
        assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn profile_satisfies_neumann_condition() {
        for (n, r, c) in [(2u32, 1.0, 1.0), (3, 2.0, 0.5), (2, 1.0, 2.5)] {
            let b = BallSpec::new(n, r).unwrap();
            let p = b.flux_profile(c).unwrap();
            let h = 1e-6;
            let du = (p.eval(r + h) - p.eval(r - h)) / (2.0 * h);
            assert!((du + 1.0).abs() < 1e-9, "n={n} c={c}: u'(R) = {du}");
        }
    }

    #[test]
    fn profile_flat_at_small_c() {
        // u_c diverges like a constant of size ~2/c as c -> 0, so flatness
        // means the spread is small relative to that constant
        let b = BallSpec::new(2, 1.0).unwrap();
        let p = b.flux_profile(1e-4).unwrap();
        let vals: Vec<f64> = (0..=40).map(|i| p.eval(i as f64 / 40.0)).collect();
        let max = vals.iter().cloned().fold(f64::MIN, f64::max);
        let min = vals.iter().cloned().fold(f64::MAX, f64::min);
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        assert!((max - min) / mean.abs() <= 1e-2, "relative spread {}", (max - min) / mean);
        assert!(mean > 1e3, "constant-dominated profile should be large");
    }

    #[test]
    fn profile_satisfies_radial_equation() {
        // u'' + (n-1)/r u' + c u = 0 checked by finite differences at r = 1
        let b = BallSpec::new(3, 2.0).unwrap();
        let c = 0.5;
        let p = b.flux_profile(c).unwrap();
        let h = 1e-4;
        let r = 1.0;
        let upp = (p.eval(r + h) - 2.0 * p.eval(r) + p.eval(r - h)) / (h * h);
        let up = (p.eval(r + h) - p.eval(r - h)) / (2.0 * h);
        let res = upp + 2.0 / r * up + c * p.eval(r);
        assert!(res.abs() < 1e-7, "radial residual {res}");
    }

    #[test]
    fn f_limits_at_zero_and_mu2() {
        let b = BallSpec::new(2, 1.0).unwrap();
        // c -> 0: P^2/|Omega| = 4 pi
        assert!((b.f_value(1e-10).unwrap() - 4.0 * PI).abs() < 1e-6);
        // c -> mu2: 2 pi
        assert!((b.limit_f_at_mu2().unwrap() - 2.0 * PI).abs() < 1e-6);
        // n = 3: (2/3) P^2/|Omega| = 8 pi
        let b3 = BallSpec::new(3, 1.0).unwrap();
        assert!((b3.limit_f_at_mu2().unwrap() - 8.0 * PI).abs() < 1e-5);
    }

    #[test]
    fn f_positive_decreasing() {
        let b = BallSpec::new(2, 1.0).unwrap();
        let mu2 = b.mu2().unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let c = mu2 * 0.999 * ((i + 1) as f64 / 200.0).powi(3).max(1e-8);
            let f = b.f_value(c).unwrap();
            assert!(f > 0.0 && f < prev, "c = {c}");
            prev = f;
        }
    }

    #[test]
    fn two_algebraic_routes_agree() {
        let b = BallSpec::new(2, 1.0).unwrap();
        for &c in &[0.3, 1.0, 2.0, 3.0] {
            let a = b.f_value(c).unwrap();
            let d = b.f_value_via_derivative(c).unwrap();
            assert!((a - d).abs() <= 1e-10 * a.abs().max(1.0), "c = {c}: {a} vs {d}");
            // and the n=2 reduction f = 2 pi z J_0(z)/J_1(z)
            let z = c.sqrt();
            let direct = 2.0 * PI * z * bessel_j_any(0.0, z) / bessel_j_any(1.0, z);
            assert!((a - direct).abs() <= 1e-10 * a.abs());
        }
    }

    #[test]
    fn rejects_c_outside_range() {
        let b = BallSpec::new(2, 1.0).unwrap();
        let mu2 = b.mu2().unwrap();
        assert!(b.f_value(-1.0).is_err());
        assert!(b.f_value(mu2 * 1.01).is_err());
        assert!(matches!(
            b.f_value(mu2 * (1.0 - 1e-12)),
            Err(Error::NearEigenvalue { .. })
        ));
    }
}
