//! Numerical toolkit for the Helmholtz problem with constant Neumann data,
//! -Delta u = c u with du/dnu = -1, on planar and product domains: closed-form
//! solutions and boundary functionals on balls, boxes, equilateral triangles
//! and circular sectors; a P1 finite-element path for general polygonal and
//! curved planar domains; constrained and rank-one-penalized Laplacian
//! spectra; and sweep orchestration that classifies domains by the sign
//! structure of the boundary flux functional f(c) = c * int_{boundary} u_c.

pub mod acceptance;
pub mod bessel;
pub mod config;
pub mod closed_form;
pub mod error;
pub mod extrapolate;
pub mod fem;
pub mod geometry;
pub mod linalg;
pub mod par;
pub mod quadrature;
pub mod sweeps;
pub mod roots;

pub use error::{Error, Result};
