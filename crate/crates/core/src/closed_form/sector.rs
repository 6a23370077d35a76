//! Spectral data of the unit circular sector S(alpha) = {r <= 1, |theta| < alpha/2}.
//!
//! Separation of variables reduces mu2 to the smaller of the radial
//! eigenvalue j_{1,1}^2 (even mode J_0(j_{1,1} r)) and the angular
//! eigenvalue (j'_{pi/alpha,1})^2 (odd mode J_{pi/alpha}(j' r) sin);
//! the crossover aperture alpha_0 solves j'_{pi/alpha,1} = j_{1,1}.
//! The boundary integral of the radial mode is affine in alpha and controls
//! the admissible trial function that pushes the constrained eigenvalue
//! below the radial one.

use crate::bessel::{bessel_j_any, first_root_j, first_root_j_prime, BesselOrder};
use crate::error::{invalid, require_finite, Result};
use crate::quadrature::adaptive_simpson;

const PI: f64 = std::f64::consts::PI;

/// Parity of the mu2 eigenspace with respect to the symmetry axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeParity {
    Even,
    Odd,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorSpec {
    alpha: f64,
}

impl SectorSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        require_finite("alpha", alpha)?;
        if alpha <= 0.0 || alpha > PI {
            return Err(invalid(format!("aperture must lie in (0, pi], got {alpha}")));
        }
        Ok(SectorSpec { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn area(&self) -> f64 {
        self.alpha / 2.0
    }

    pub fn perimeter(&self) -> f64 {
        2.0 + self.alpha
    }

    /// int_{boundary} J_0(j_{1,1} r) ds
    ///   = (2/j_{1,1}) int_0^{j_{1,1}} J_0 + alpha J_0(j_{1,1}).
    pub fn boundary_integral_radial_mode(&self) -> Result<f64> {
        let (a, b) = radial_boundary_linearization()?;
        Ok(a + b * self.alpha)
    }

    /// mu2(S(alpha)) with the parity of its eigenspace; `Double` within
    /// relative 1e-9 of the crossover.
    pub fn mu2(&self) -> Result<(f64, ModeParity)> {
        let radial = first_root_j(BesselOrder::new(1.0)?)?.powi(2);
        let nu = PI / self.alpha;
        let angular = first_root_j_prime(BesselOrder::new(nu)?)?.powi(2);
        let min = radial.min(angular);
        if (radial - angular).abs() <= 1e-9 * min {
            Ok((min, ModeParity::Double))
        } else if radial < angular {
            Ok((radial, ModeParity::Even))
        } else {
            Ok((angular, ModeParity::Odd))
        }
    }

    /// Rayleigh quotient of J_0(j_{1,1} r) minus its boundary mean: an upper
    /// bound for the first boundary-mean-zero eigenvalue,
    ///   kappa_1 <= j^2 D / (D + mean^2 |S|),
    /// D = alpha int_0^1 J_0(j r)^2 r dr. The radial mode is a genuine
    /// Neumann eigenfunction of the sector, so the numerator is j^2 D
    /// exactly; everything here reduces to radial quadratures.
    pub fn trial_upper_bound(&self) -> Result<f64> {
        let j = first_root_j(BesselOrder::new(1.0)?)?;
        let d = self.alpha * adaptive_simpson(&|r: f64| bessel_j_any(0.0, j * r).powi(2) * r, 0.0, 1.0, 1e-12);
        let boundary = self.boundary_integral_radial_mode()?;
        let mean = boundary / self.perimeter();
        Ok(j * j * d / (d + mean * mean * self.area()))
    }
}

/// Coefficients (A, B) of int_{boundary} J_0(j_{1,1} r) ds = A + B alpha.
pub fn radial_boundary_linearization() -> Result<(f64, f64)> {
    let j = first_root_j(BesselOrder::new(1.0)?)?;
    let integral = adaptive_simpson(&|r: f64| bessel_j_any(0.0, r), 0.0, j, 1e-10);
    Ok((2.0 / j * integral, bessel_j_any(0.0, j)))
}

/// The crossover aperture: the unique alpha with j'_{pi/alpha,1} = j_{1,1},
/// located by monotone bisection over (0.5, 2) (the left side is strictly
/// decreasing in alpha).
pub fn alpha0() -> Result<f64> {
    let j11 = first_root_j(BesselOrder::new(1.0)?)?;
    let g = |alpha: f64| -> Result<f64> {
        Ok(first_root_j_prime(BesselOrder::new(PI / alpha)?)? - j11)
    };
    let (mut lo, mut hi) = (0.5f64, 2.0f64);
    if !(g(lo)? > 0.0 && g(hi)? < 0.0) {
        return Err(crate::error::Error::RootBracketing { what: "alpha0 crossover".to_string(), lo, hi });
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    const J11: f64 = 3.83170597020751231561443588631;

    #[test]
    fn linearization_coefficients() {
        let (a, b) = radial_boundary_linearization().unwrap();
        assert!((a - 0.57009).abs() < 1e-4, "A = {a:.6}");
        assert!((-b - 0.40276).abs() < 1e-4, "B = {b:.6}");
        // full-precision regression values
        assert!((a - 0.570085531522082).abs() < 1e-9);
        assert!((b + 0.402759395702553).abs() < 1e-9);
    }

    #[test]
    fn boundary_integral_signs() {
        // positive at alpha = 1.1748, sign change near alpha = 1.4154
        let s = SectorSpec::new(1.1748).unwrap();
        assert!(s.boundary_integral_radial_mode().unwrap() > 0.0);
        let (a, b) = radial_boundary_linearization().unwrap();
        let root = -a / b;
        assert!((root - 1.4154).abs() < 1e-3, "root = {root:.5}");
        assert!(SectorSpec::new(1.41).unwrap().boundary_integral_radial_mode().unwrap() > 0.0);
        assert!(SectorSpec::new(1.42).unwrap().boundary_integral_radial_mode().unwrap() < 0.0);
        // affine form matches a direct quadrature of the three boundary pieces
        let alpha = 0.9;
        let direct = 2.0 * adaptive_simpson(&|r: f64| bessel_j_any(0.0, J11 * r), 0.0, 1.0, 1e-12)
            + alpha * bessel_j_any(0.0, J11);
        let s = SectorSpec::new(alpha).unwrap();
        assert!((s.boundary_integral_radial_mode().unwrap() - direct).abs() < 1e-9);
    }

    #[test]
    fn alpha0_location_and_defining_equation() {
        let a0 = alpha0().unwrap();
        assert!((a0 - 1.1748).abs() < 1e-3, "alpha0 = {a0:.6}");
        let jprime = first_root_j_prime(BesselOrder::new(PI / a0).unwrap()).unwrap();
        assert!((jprime - J11).abs() < 1e-8);
        // crossover of the two candidate eigenvalues around alpha0
        let below = SectorSpec::new(a0 - 0.05).unwrap();
        let nu = PI / below.alpha();
        let ang = first_root_j_prime(BesselOrder::new(nu).unwrap()).unwrap().powi(2);
        assert!(J11 * J11 < ang);
        let above = SectorSpec::new(a0 + 0.05).unwrap();
        let nu = PI / above.alpha();
        let ang = first_root_j_prime(BesselOrder::new(nu).unwrap()).unwrap().powi(2);
        assert!(ang < J11 * J11);
    }

    #[test]
    fn mu2_branches_and_parity() {
        let (v, p) = SectorSpec::new(1.0).unwrap().mu2().unwrap();
        assert!((v - 14.682).abs() < 1e-3);
        assert_eq!(p, ModeParity::Even);
        let (v, p) = SectorSpec::new(1.3).unwrap().mu2().unwrap();
        let nu = PI / 1.3;
        let expect = first_root_j_prime(BesselOrder::new(nu).unwrap()).unwrap().powi(2);
        assert!((v - expect).abs() < 1e-12);
        assert_eq!(p, ModeParity::Odd);
        let a0 = alpha0().unwrap();
        let (_, p) = SectorSpec::new(a0).unwrap().mu2().unwrap();
        assert_eq!(p, ModeParity::Double);
    }

    #[test]
    fn trial_bound_beats_radial_eigenvalue() {
        // the bound is meaningful whenever the radial boundary integral is
        // nonzero; below alpha0 it certifies kappa_1 < mu2
        for &alpha in &[0.8, 1.0, 1.1748] {
            let s = SectorSpec::new(alpha).unwrap();
            let q = s.trial_upper_bound().unwrap();
            assert!(q < J11 * J11, "alpha={alpha}: {q}");
        }
        let q = SectorSpec::new(1.0).unwrap().trial_upper_bound().unwrap();
        assert!((q - 14.4057).abs() < 1e-3, "q = {q:.5}");
    }

    #[test]
    fn rejects_bad_apertures() {
        assert!(SectorSpec::new(0.0).is_err());
        assert!(SectorSpec::new(PI + 0.01).is_err());
        assert!(SectorSpec::new(f64::NAN).is_err());
    }
}
