//! Planar domain catalog and its polygonal boundary loops.
//!
//! Curved boundaries (disks, ellipses, sector arcs) are represented by
//! inscribed polygons whose vertices lie exactly on the true curve, plus a
//! per-node projection tag that refinement uses to push new midpoints back
//! onto the curve. All curves are centered at the origin.

mod mesh;
mod refine;

pub use mesh::{triangulate, Mesh};

use crate::closed_form::{BallSpec, BoxSpec, EquilateralSpec, SectorSpec};
use crate::error::{invalid, Error, Result};

const MIN_CURVED_SEGMENTS: usize = 16;

/// Projection target of a boundary node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveTag {
    None,
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    Arc { radius: f64 },
}

impl CurveTag {
    pub(crate) fn project(&self, p: [f64; 2]) -> [f64; 2] {
        match *self {
            CurveTag::None => p,
            CurveTag::Circle { radius } | CurveTag::Arc { radius } => {
                let norm = (p[0] * p[0] + p[1] * p[1]).sqrt();
                [p[0] / norm * radius, p[1] / norm * radius]
            }
            CurveTag::Ellipse { a, b } => {
                let q = [p[0] / a, p[1] / b];
                let norm = (q[0] * q[0] + q[1] * q[1]).sqrt();
                [q[0] / norm * a, q[1] / norm * b]
            }
        }
    }
}

/// Declarative description of a planar domain (n >= 3 ball/box variants are
/// served by closed forms only and are rejected by the meshing path).
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Ball { spec: BallSpec, segments: usize },
    Box { spec: BoxSpec },
    Polygon { vertices: Vec<[f64; 2]> },
    Ellipse { semi_major: f64, semi_minor: f64, segments: usize },
    Sector { spec: SectorSpec, arc_segments: usize },
    Equilateral { spec: EquilateralSpec },
}

impl DomainSpec {
    pub fn disk(radius: f64, segments: usize) -> Result<Self> {
        Ok(DomainSpec::Ball { spec: BallSpec::new(2, radius)?, segments: check_segments(segments)? })
    }

    pub fn rectangle(a1: f64, a2: f64) -> Result<Self> {
        Ok(DomainSpec::Box { spec: BoxSpec::new(vec![a1, a2])? })
    }

    pub fn square(half: f64) -> Result<Self> {
        Self::rectangle(half, half)
    }

    /// Regular k-gon with given circumradius; first vertex at angle pi/k.
    pub fn regular_polygon(k: usize, circumradius: f64) -> Result<Self> {
        if k < 3 {
            return Err(invalid(format!("regular polygon needs k >= 3 sides, got {k}")));
        }
        if !(circumradius > 0.0 && circumradius.is_finite()) {
            return Err(invalid(format!("circumradius must be positive, got {circumradius}")));
        }
        let vertices = (0..k)
            .map(|j| {
                let th = std::f64::consts::PI / k as f64 * (1.0 + 2.0 * j as f64);
                [circumradius * th.cos(), circumradius * th.sin()]
            })
            .collect();
        Ok(DomainSpec::Polygon { vertices })
    }

    /// Isosceles triangle: apex at the origin, aperture opening around +x.
    pub fn isosceles_triangle(aperture: f64, equal_side: f64) -> Result<Self> {
        if !(aperture > 0.0 && aperture < std::f64::consts::PI) {
            return Err(invalid(format!("aperture must lie in (0, pi), got {aperture}")));
        }
        if !(equal_side > 0.0 && equal_side.is_finite()) {
            return Err(invalid(format!("equal side must be positive, got {equal_side}")));
        }
        let h = aperture / 2.0;
        let vertices = vec![
            [0.0, 0.0],
            [equal_side * h.cos(), -equal_side * h.sin()],
            [equal_side * h.cos(), equal_side * h.sin()],
        ];
        Ok(DomainSpec::Polygon { vertices })
    }

    /// Rhombus with diagonals on the axes and the given vertex angle at the
    /// x-axis vertices.
    pub fn rhombus(angle: f64, side: f64) -> Result<Self> {
        if !(angle > 0.0 && angle <= std::f64::consts::FRAC_PI_2 + 1e-12) {
            return Err(invalid(format!("rhombus vertex angle must lie in (0, pi/2], got {angle}")));
        }
        let p = side * (angle / 2.0).sin();
        let q = side * (angle / 2.0).cos();
        Ok(DomainSpec::Polygon { vertices: vec![[q, 0.0], [0.0, p], [-q, 0.0], [0.0, -p]] })
    }

    pub fn ellipse(semi_major: f64, semi_minor: f64, segments: usize) -> Result<Self> {
        if !(semi_major > 0.0 && semi_minor > 0.0 && semi_major.is_finite() && semi_minor.is_finite()) {
            return Err(invalid("ellipse semi-axes must be positive".to_string()));
        }
        Ok(DomainSpec::Ellipse { semi_major, semi_minor, segments: check_segments(segments)? })
    }

    pub fn sector(alpha: f64, arc_segments: usize) -> Result<Self> {
        Ok(DomainSpec::Sector { spec: SectorSpec::new(alpha)?, arc_segments: check_segments(arc_segments)? })
    }

    pub fn equilateral(side: f64) -> Result<Self> {
        Ok(DomainSpec::Equilateral { spec: EquilateralSpec::new(side)? })
    }

    /// Stable identifier used in serialized reports.
    pub fn id(&self) -> String {
        match self {
            DomainSpec::Ball { spec, segments } => format!("disk-r{}-s{}", spec.radius(), segments),
            DomainSpec::Box { spec } => {
                let dims: Vec<String> = spec.half_lengths().iter().map(|a| format!("{a}")).collect();
                format!("box-{}", dims.join("x"))
            }
            DomainSpec::Polygon { vertices } => {
                // FNV-1a over the coordinate bits: distinct polygons with the
                // same vertex count must not collide
                let mut h: u64 = 0xcbf29ce484222325;
                for p in vertices {
                    for v in p {
                        for byte in v.to_bits().to_le_bytes() {
                            h ^= byte as u64;
                            h = h.wrapping_mul(0x100000001b3);
                        }
                    }
                }
                format!("polygon-{}v-{:08x}", vertices.len(), (h >> 32) as u32)
            }
            DomainSpec::Ellipse { semi_major, semi_minor, .. } => {
                format!("ellipse-{semi_major}x{semi_minor}")
            }
            DomainSpec::Sector { spec, .. } => format!("sector-{}", spec.alpha()),
            DomainSpec::Equilateral { spec } => format!("equilateral-{}", spec.side()),
        }
    }

    /// Counterclockwise polygonal boundary with curved-projection tags.
    pub fn boundary_loop(&self) -> Result<BoundaryLoop> {
        let (points, tags) = match self {
            DomainSpec::Ball { spec, segments } => {
                if spec.dim() != 2 {
                    return Err(invalid(format!("meshing needs a planar ball, got dimension {}", spec.dim())));
                }
                let m = check_segments(*segments)?;
                let r = spec.radius();
                let pts: Vec<[f64; 2]> = (0..m)
                    .map(|j| {
                        let th = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                        [r * th.cos(), r * th.sin()]
                    })
                    .collect();
                let tags = vec![CurveTag::Circle { radius: r }; m];
                (pts, tags)
            }
            DomainSpec::Box { spec } => {
                if spec.n() != 2 {
                    return Err(invalid(format!("meshing needs a planar box, got {} half-lengths", spec.n())));
                }
                let (a1, a2) = (spec.half_lengths()[0], spec.half_lengths()[1]);
                let pts = vec![[-a1, -a2], [a1, -a2], [a1, a2], [-a1, a2]];
                (pts, vec![CurveTag::None; 4])
            }
            DomainSpec::Polygon { vertices } => (vertices.clone(), vec![CurveTag::None; vertices.len()]),
            DomainSpec::Ellipse { semi_major, semi_minor, segments } => {
                let m = check_segments(*segments)?;
                let (a, b) = (*semi_major, *semi_minor);
                let pts: Vec<[f64; 2]> = (0..m)
                    .map(|j| {
                        let th = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                        [a * th.cos(), b * th.sin()]
                    })
                    .collect();
                (pts, vec![CurveTag::Ellipse { a, b }; m])
            }
            DomainSpec::Sector { spec, arc_segments } => {
                let m = check_segments(*arc_segments)?;
                let alpha = spec.alpha();
                let mut pts = vec![[0.0, 0.0]];
                let mut tags = vec![CurveTag::None];
                for j in 0..=m {
                    let th = -alpha / 2.0 + alpha * j as f64 / m as f64;
                    pts.push([th.cos(), th.sin()]);
                    tags.push(CurveTag::Arc { radius: 1.0 });
                }
                (pts, tags)
            }
            DomainSpec::Equilateral { spec } => {
                let v = spec.vertices();
                (v.to_vec(), vec![CurveTag::None; 3])
            }
        };
        BoundaryLoop::new(points, tags)
    }
}

fn check_segments(m: usize) -> Result<usize> {
    if m < MIN_CURVED_SEGMENTS {
        Err(invalid(format!("curved boundaries need at least {MIN_CURVED_SEGMENTS} segments, got {m}")))
    } else {
        Ok(m)
    }
}

/// Simple counterclockwise boundary polygon with per-vertex curve tags.
#[derive(Debug, Clone)]
pub struct BoundaryLoop {
    pub points: Vec<[f64; 2]>,
    pub tags: Vec<CurveTag>,
}

impl BoundaryLoop {
    pub fn new(points: Vec<[f64; 2]>, tags: Vec<CurveTag>) -> Result<Self> {
        if points.len() < 3 || points.len() != tags.len() {
            return Err(Error::InvalidDomain("boundary loop needs >= 3 tagged vertices".to_string()));
        }
        let area = shoelace_area(&points);
        if area <= 1e-12 {
            return Err(Error::InvalidDomain(format!("loop area {area:.3e} is not positive (or loop is clockwise)")));
        }
        if has_self_intersection(&points) {
            return Err(Error::InvalidDomain("boundary loop is self-intersecting".to_string()));
        }
        Ok(BoundaryLoop { points, tags })
    }

    pub fn area(&self) -> f64 {
        shoelace_area(&self.points)
    }
}

pub(crate) fn shoelace_area(points: &[[f64; 2]]) -> f64 {
    let m = points.len();
    let mut acc = 0.0;
    for i in 0..m {
        let p = points[i];
        let q = points[(i + 1) % m];
        acc += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * acc
}

fn segments_properly_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let cross = |o: [f64; 2], p: [f64; 2], q: [f64; 2]| (p[0] - o[0]) * (q[1] - o[1]) - (q[0] - o[0]) * (p[1] - o[1]);
    let d1 = cross(a, b, c);
    let d2 = cross(a, b, d);
    let d3 = cross(c, d, a);
    let d4 = cross(c, d, b);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn has_self_intersection(points: &[[f64; 2]]) -> bool {
    let m = points.len();
    for i in 0..m {
        for j in (i + 1)..m {
            // skip adjacent segments (they share a vertex)
            if j == i || (j + 1) % m == i || (i + 1) % m == j {
                continue;
            }
            if segments_properly_intersect(points[i], points[(i + 1) % m], points[j], points[(j + 1) % m]) {
                return true;
            }
        }
    }
    false
}
