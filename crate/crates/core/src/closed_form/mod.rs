//! Closed-form (up to quadrature) flux solutions, boundary functionals,
//! eigenvalues and inequality gaps on the domains where they exist: balls,
//! rectangular boxes, equilateral triangles and unit circular sectors.

pub mod ball;
pub mod box_domain;
pub mod sector;
pub mod sym_poly;
pub mod triangle;

pub use ball::{BallSpec, RadialFluxProfile};
pub use box_domain::{BoxFluxSolution, BoxSpec};
pub use sector::{alpha0, radial_boundary_linearization, ModeParity, SectorSpec};
pub use sym_poly::{elementary_symmetric, SymPolyBundle};
pub use triangle::{EquilateralSpec, ModeKind, TriangleFlux, TriangleMode};
