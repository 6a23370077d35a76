//! Hand-rolled numerical kernels: CSR storage, profile LDL^T with RCM
//! ordering, small dense eigensolvers, and least-squares fits. Everything is
//! deterministic; no randomized pivoting or threading inside factorizations.

pub mod dense;
pub mod skyline;
pub mod sparse;

pub use dense::{generalized_small, jacobi_eigh, polyfit, solve_small, DenseMat};
pub use skyline::{rcm_order, shifted_combination, SkylineFactor};
pub use sparse::CsrMatrix;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}
