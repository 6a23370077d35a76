//! The flux problem on rectangular boxes prod_i (-a_i, a_i).
//!
//! The separable solution u_c = c^{-1/2} sum_i cos(sqrt(c) x_i)/sin(sqrt(c) a_i)
//! satisfies the equation identically, so the boundary functional and its
//! limit at mu2 = (pi/(2 a_1))^2 come out in elementary closed form. The
//! limit minus (n-1)/n P^2/|Omega| is the inequality gap that vanishes
//! exactly at cubes.

use super::sym_poly::SymPolyBundle;
use crate::error::{invalid, require_finite, Error, Result};

const SIN_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct BoxSpec {
    /// a_1 >= a_2 >= ... >= a_n > 0
    half_lengths: Vec<f64>,
}

impl BoxSpec {
    /// Accepts half-lengths in any order; stores them sorted descending.
    pub fn new(half_lengths: Vec<f64>) -> Result<Self> {
        if half_lengths.len() < 2 {
            return Err(invalid("a box needs at least 2 half-lengths".to_string()));
        }
        for &a in &half_lengths {
            require_finite("half-length", a)?;
            if a <= 0.0 {
                return Err(invalid(format!("half-lengths must be positive, got {a}")));
            }
        }
        let mut sorted = half_lengths;
        sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
        Ok(BoxSpec { half_lengths: sorted })
    }

    pub fn n(&self) -> usize {
        self.half_lengths.len()
    }

    pub fn half_lengths(&self) -> &[f64] {
        &self.half_lengths
    }

    pub fn volume(&self) -> f64 {
        2f64.powi(self.n() as i32) * self.half_lengths.iter().product::<f64>()
    }

    /// Surface measure 2^n sigma_{n-1}.
    pub fn perimeter(&self) -> f64 {
        let bundle = self.sym_poly_bundle();
        2f64.powi(self.n() as i32) * bundle.sigma[self.n() - 1]
    }

    pub fn isoperimetric_ratio(&self) -> f64 {
        self.perimeter() * self.perimeter() / self.volume()
    }

    pub fn mu2(&self) -> f64 {
        let a1 = self.half_lengths[0];
        let z = std::f64::consts::PI / (2.0 * a1);
        z * z
    }

    pub fn sym_poly_bundle(&self) -> SymPolyBundle {
        SymPolyBundle::from_half_lengths(&self.half_lengths)
    }

    fn check_sines(&self, c: f64) -> Result<f64> {
        require_finite("c", c)?;
        if c <= 0.0 {
            return Err(invalid(format!("c must be positive, got {c}")));
        }
        let sq = c.sqrt();
        for &a in &self.half_lengths {
            let t = sq * a / std::f64::consts::PI;
            if (t - t.round()).abs() * std::f64::consts::PI < SIN_GUARD && t.round() >= 1.0 {
                let k = t.round();
                let sing = (k * std::f64::consts::PI / a).powi(2);
                return Err(Error::NearEigenvalue { c, eigenvalue: sing });
            }
        }
        Ok(sq)
    }

    /// Separable evaluation handle for u_c, c in (0, mu2).
    pub fn flux_solution(&self, c: f64) -> Result<BoxFluxSolution> {
        if c >= self.mu2() {
            return Err(invalid(format!("c = {c} is not below mu2 = {}", self.mu2())));
        }
        let sq = self.check_sines(c)?;
        Ok(BoxFluxSolution { half_lengths: self.half_lengths.clone(), c, sqrt_c: sq })
    }

    /// f(c) = sum_i [ sqrt(c) (V/a_i) cot(sqrt(c) a_i) + (V/a_i) sum_{j != i} 1/a_j ].
    pub fn f_value(&self, c: f64) -> Result<f64> {
        if c >= self.mu2() {
            return Err(invalid(format!("c = {c} is not below mu2 = {}", self.mu2())));
        }
        self.f_value_extended(c)
    }

    /// The same expression continued past mu2; it stays meaningful (and
    /// smooth across solvable eigenvalues) until sqrt(c) a_1 reaches pi,
    /// which is what the c_0 continuation study exploits.
    pub fn f_value_extended(&self, c: f64) -> Result<f64> {
        let sq = self.check_sines(c)?;
        let vol = self.volume();
        let inv_sum: f64 = self.half_lengths.iter().map(|a| 1.0 / a).sum();
        let mut acc = 0.0;
        for &ai in &self.half_lengths {
            let t = sq * ai;
            acc += sq * (vol / ai) * (t.cos() / t.sin()) + (vol / ai) * (inv_sum - 1.0 / ai);
        }
        Ok(acc)
    }

    /// lim_{c -> mu2} f(c): the i >= 2 cotangent terms plus 2^{n+1} sigma_{n-2},
    /// with cot(pi/2) substituted by exact zero when a_i = a_1.
    pub fn limit_at_mu2(&self) -> f64 {
        let n = self.n();
        let bundle = self.sym_poly_bundle();
        let a1 = self.half_lengths[0];
        let mut acc = 2f64.powi(n as i32 + 1) * bundle.sigma[n - 2];
        for &ai in &self.half_lengths[1..] {
            if ai == a1 {
                continue; // cot(pi/2) = 0 exactly
            }
            let theta = std::f64::consts::FRAC_PI_2 * ai / a1;
            acc += 2f64.powi(n as i32 - 1) * std::f64::consts::PI * bundle.sigma[n] / (a1 * ai)
                * (theta.cos() / theta.sin());
        }
        acc
    }

    /// limit_at_mu2 - (n-1)/n * P^2/|Omega|; nonnegative, zero only at cubes.
    pub fn inequality_gap(&self) -> f64 {
        let n = self.n() as f64;
        self.limit_at_mu2() - (n - 1.0) / n * self.isoperimetric_ratio()
    }
}

/// Immutable separable evaluation handle for one (box, c) pair.
#[derive(Debug, Clone)]
pub struct BoxFluxSolution {
    half_lengths: Vec<f64>,
    c: f64,
    sqrt_c: f64,
}

impl BoxFluxSolution {
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.half_lengths.len());
        let mut acc = 0.0;
        for (xi, ai) in x.iter().zip(&self.half_lengths) {
            acc += (self.sqrt_c * xi).cos() / (self.sqrt_c * ai).sin();
        }
        acc / self.sqrt_c
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Minimum of u_c over the boundary. With sqrt(c) a_i < pi/2 every
    /// cosine factor is decreasing on the face, so the minimum sits at a
    /// corner.
    pub fn boundary_min(&self) -> f64 {
        let corner: Vec<f64> = self.half_lengths.clone();
        self.eval(&corner)
    }
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn gap_is_nonnegative(n in 2usize..=6, seeds in proptest::collection::vec(0.3f64..3.0, 6)) {
            let half: Vec<f64> = seeds[..n].to_vec();
            let b = BoxSpec::new(half).unwrap();
            prop_assert!(b.inequality_gap() >= -1e-9);
        }

        #[test]
        fn f_positive_and_decreasing_below_mu2(a1 in 0.5f64..2.0, a2 in 0.3f64..1.8) {
            let b = BoxSpec::new(vec![a1, a2]).unwrap();
            let mu2 = b.mu2();
            let mut prev = f64::INFINITY;
            for i in 1..=40 {
                let c = mu2 * 0.999 * (i as f64 / 40.0).powi(2);
                let f = b.f_value(c).unwrap();
                prop_assert!(f > 0.0 && f < prev);
                prev = f;
            }
        }
    }
}
