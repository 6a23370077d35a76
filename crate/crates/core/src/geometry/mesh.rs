//! Triangle meshes: construction from boundary loops, validity checks, and
//! plain-text export.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{shoelace_area, BoundaryLoop, CurveTag};
use crate::error::{Error, Result};

/// Planar triangulation with oriented boundary and curved-projection tags.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    /// Counterclockwise node-index triples.
    pub triangles: Vec<[usize; 3]>,
    /// Oriented so the domain lies on the left; traverses the loop once.
    pub boundary_edges: Vec<[usize; 2]>,
    /// Projection target per node (`None` for interior and straight-side nodes).
    pub curved: Vec<CurveTag>,
}

pub(crate) fn signed_area(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
}

/// Triangulate a simple counterclockwise loop: a lone triangle is kept as
/// is, convex loops fan from the centroid, and non-convex simple polygons
/// are ear-clipped without inserting nodes.
pub fn triangulate(lp: &BoundaryLoop) -> Result<Mesh> {
    let m = lp.points.len();
    let boundary_edges: Vec<[usize; 2]> = (0..m).map(|i| [i, (i + 1) % m]).collect();
    if m == 3 {
        let mesh = Mesh {
            nodes: lp.points.clone(),
            triangles: vec![[0, 1, 2]],
            boundary_edges,
            curved: lp.tags.clone(),
        };
        mesh.validate()?;
        return Ok(mesh);
    }
    let scale: f64 = lp.points.iter().map(|p| p[0].abs() + p[1].abs()).fold(0.0, f64::max);
    let convex = (0..m).all(|i| {
        let a = lp.points[i];
        let b = lp.points[(i + 1) % m];
        let c = lp.points[(i + 2) % m];
        2.0 * signed_area(a, b, c) >= -1e-12 * scale * scale
    });
    let mesh = if convex {
        let mut nodes = lp.points.clone();
        let centroid = [
            nodes.iter().map(|p| p[0]).sum::<f64>() / m as f64,
            nodes.iter().map(|p| p[1]).sum::<f64>() / m as f64,
        ];
        nodes.push(centroid);
        let triangles = (0..m).map(|i| [i, (i + 1) % m, m]).collect();
        let mut curved = lp.tags.clone();
        curved.push(CurveTag::None);
        Mesh { nodes, triangles, boundary_edges, curved }
    } else {
        let triangles = ear_clip(&lp.points)?;
        Mesh { nodes: lp.points.clone(), triangles, boundary_edges, curved: lp.tags.clone() }
    };
    mesh.validate()?;
    Ok(mesh)
}

fn ear_clip(points: &[[f64; 2]]) -> Result<Vec<[usize; 3]>> {
    let mut ring: Vec<usize> = (0..points.len()).collect();
    let mut triangles = Vec::with_capacity(points.len() - 2);
    let inside = |a: [f64; 2], b: [f64; 2], c: [f64; 2], p: [f64; 2]| {
        signed_area(a, b, p) >= 0.0 && signed_area(b, c, p) >= 0.0 && signed_area(c, a, p) >= 0.0
    };
    let scale: f64 = points.iter().map(|p| p[0].abs() + p[1].abs()).fold(0.0, f64::max);
    while ring.len() > 3 {
        let n = ring.len();
        let mut clipped = false;
        for k in 0..n {
            let (ia, ib, ic) = (ring[(k + n - 1) % n], ring[k], ring[(k + 1) % n]);
            let (a, b, c) = (points[ia], points[ib], points[ic]);
            if 2.0 * signed_area(a, b, c) <= 1e-12 * scale * scale {
                continue; // reflex or degenerate corner
            }
            let blocked = ring
                .iter()
                .any(|&j| j != ia && j != ib && j != ic && inside(a, b, c, points[j]));
            if !blocked {
                triangles.push([ia, ib, ic]);
                ring.remove(k);
                clipped = true;
                break;
            }
        }
        if !clipped {
            return Err(Error::InvalidMesh("ear clipping stalled (collinear or degenerate loop)".to_string()));
        }
    }
    triangles.push([ring[0], ring[1], ring[2]]);
    Ok(triangles)
}

impl Mesh {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| signed_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]))
            .sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.boundary_edges
            .iter()
            .map(|e| {
                let p = self.nodes[e[0]];
                let q = self.nodes[e[1]];
                ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt()
            })
            .sum()
    }

    pub fn isoperimetric_ratio(&self) -> f64 {
        self.perimeter() * self.perimeter() / self.area()
    }

    /// Boundary node indices, ascending.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.boundary_edges.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Chain the oriented boundary edges into the single closed loop they
    /// must form on a simply connected mesh.
    pub fn boundary_loop_nodes(&self) -> Result<Vec<usize>> {
        let mut next: HashMap<usize, usize> = HashMap::new();
        for e in &self.boundary_edges {
            if next.insert(e[0], e[1]).is_some() {
                return Err(Error::InvalidMesh(format!("boundary branches at node {}", e[0])));
            }
        }
        let start = self.boundary_edges[0][0];
        let mut loop_nodes = vec![start];
        let mut cur = start;
        for _ in 0..self.boundary_edges.len() {
            cur = *next
                .get(&cur)
                .ok_or_else(|| Error::InvalidMesh(format!("boundary chain breaks at node {cur}")))?;
            if cur == start {
                break;
            }
            loop_nodes.push(cur);
        }
        if loop_nodes.len() != self.boundary_edges.len() {
            return Err(Error::InvalidMesh("boundary edges do not form a single closed loop".to_string()));
        }
        Ok(loop_nodes)
    }

    /// Structural and metric validity: positive triangle areas, manifold
    /// edges (interior edges in exactly two triangles, boundary edges in
    /// exactly one, matching the stored boundary list), and triangle areas
    /// summing to the polygonal area of the boundary loop.
    pub fn validate(&self) -> Result<()> {
        for (idx, t) in self.triangles.iter().enumerate() {
            let area = signed_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]);
            if area <= 0.0 {
                return Err(Error::DegenerateTriangle { index: idx, area });
            }
        }
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                *counts.entry(key).or_insert(0) += 1;
            }
        }
        let mut boundary_keys: Vec<(usize, usize)> = self
            .boundary_edges
            .iter()
            .map(|e| (e[0].min(e[1]), e[0].max(e[1])))
            .collect();
        boundary_keys.sort_unstable();
        let mut single: Vec<(usize, usize)> = counts
            .iter()
            .filter_map(|(&k, &c)| if c == 1 { Some(k) } else { None })
            .collect();
        single.sort_unstable();
        if single != boundary_keys {
            return Err(Error::InvalidMesh("boundary edge list does not match the single-triangle edges".to_string()));
        }
        if counts.values().any(|&c| c > 2) {
            return Err(Error::InvalidMesh("an edge belongs to more than two triangles".to_string()));
        }
        let loop_nodes = self.boundary_loop_nodes()?;
        let loop_pts: Vec<[f64; 2]> = loop_nodes.iter().map(|&i| self.nodes[i]).collect();
        let poly_area = shoelace_area(&loop_pts);
        let mesh_area = self.area();
        if (poly_area - mesh_area).abs() > 1e-12 * poly_area.abs().max(1.0) {
            return Err(Error::InvalidMesh(format!(
                "triangle areas sum to {mesh_area} but the boundary loop encloses {poly_area}"
            )));
        }
        Ok(())
    }

    /// Plain-text export: a count header, node coordinates, triangle index
    /// triples, then oriented boundary edges.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {} {}", self.nodes.len(), self.triangles.len(), self.boundary_edges.len()).unwrap();
        for p in &self.nodes {
            writeln!(out, "{:.16e} {:.16e}", p[0], p[1]).unwrap();
        }
        for t in &self.triangles {
            writeln!(out, "{} {} {}", t[0], t[1], t[2]).unwrap();
        }
        for e in &self.boundary_edges {
            writeln!(out, "{} {}", e[0], e[1]).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;

    #[test]
    fn square_fans_from_centroid() {
        let lp = DomainSpec::square(0.5).unwrap().boundary_loop().unwrap();
        let mesh = triangulate(&lp).unwrap();
        assert_eq!(mesh.triangle_count(), 4);
        assert_eq!(mesh.node_count(), 5);
        assert!((mesh.area() - 1.0).abs() < 1e-14);
        assert!((mesh.perimeter() - 4.0).abs() < 1e-14);
        mesh.validate().unwrap();
    }

    #[test]
    fn lone_triangle_passes_through() {
        let lp = DomainSpec::equilateral(2.0).unwrap().boundary_loop().unwrap();
        let mesh = triangulate(&lp).unwrap();
        assert_eq!(mesh.triangle_count(), 1);
        assert_eq!(mesh.node_count(), 3);
    }

    #[test]
    fn nonconvex_polygon_is_ear_clipped() {
        let lp = super::super::BoundaryLoop::new(
            vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [1.0, 2.0], [1.0, 1.0], [0.0, 1.0]],
            vec![CurveTag::None; 6],
        )
        .unwrap();
        let mesh = triangulate(&lp).unwrap();
        mesh.validate().unwrap();
        assert_eq!(mesh.triangle_count(), 4); // m - 2 ears
        assert!((mesh.area() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn boundary_loop_is_closed_chain() {
        let lp = DomainSpec::regular_polygon(6, 1.0).unwrap().boundary_loop().unwrap();
        let mesh = triangulate(&lp).unwrap();
        let chain = mesh.boundary_loop_nodes().unwrap();
        assert_eq!(chain.len(), 6);
    }

    #[test]
    fn export_roundtrips_counts() {
        let lp = DomainSpec::square(1.0).unwrap().boundary_loop().unwrap();
        let mesh = triangulate(&lp).unwrap();
        let text = mesh.export_text();
        let first = text.lines().next().unwrap();
        assert_eq!(first, "5 4 4");
        assert_eq!(text.lines().count(), 1 + 5 + 4 + 4);
    }
}
