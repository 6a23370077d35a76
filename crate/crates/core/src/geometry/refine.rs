//! Uniform midpoint 4-subdivision with curved-boundary projection.

use std::collections::{HashMap, HashSet};

use super::mesh::Mesh;
use super::CurveTag;

impl Mesh {
    /// One level of midpoint subdivision. New midpoints of boundary edges
    /// whose endpoints share a curve tag are projected onto that curve;
    /// all interior midpoints (including chords between curved boundary
    /// nodes) stay straight. Node ordering is deterministic: parents first,
    /// then midpoints in triangle-traversal order.
    pub fn refine(&self) -> Mesh {
        let mut nodes = self.nodes.clone();
        let mut curved = self.curved.clone();
        let boundary: HashSet<(usize, usize)> = self
            .boundary_edges
            .iter()
            .map(|e| (e[0].min(e[1]), e[0].max(e[1])))
            .collect();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, nodes: &mut Vec<[f64; 2]>, curved: &mut Vec<CurveTag>| -> usize {
            let key = (a.min(b), a.max(b));
            if let Some(&idx) = midpoint.get(&key) {
                return idx;
            }
            let p = nodes[a];
            let q = nodes[b];
            let mut point = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
            let mut tag = CurveTag::None;
            if boundary.contains(&key) && curved[a] == curved[b] && curved[a] != CurveTag::None {
                tag = curved[a];
                point = tag.project(point);
            }
            nodes.push(point);
            curved.push(tag);
            let idx = nodes.len() - 1;
            midpoint.insert(key, idx);
            idx
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for t in &self.triangles {
            let [a, b, c] = *t;
            let ab = mid(a, b, &mut nodes, &mut curved);
            let bc = mid(b, c, &mut nodes, &mut curved);
            let ca = mid(c, a, &mut nodes, &mut curved);
            triangles.push([a, ab, ca]);
            triangles.push([ab, b, bc]);
            triangles.push([ca, bc, c]);
            triangles.push([ab, bc, ca]);
        }
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for e in &self.boundary_edges {
            let m = mid(e[0], e[1], &mut nodes, &mut curved);
            boundary_edges.push([e[0], m]);
            boundary_edges.push([m, e[1]]);
        }
        Mesh { nodes, triangles, boundary_edges, curved }
    }

    pub fn refine_levels(&self, levels: u32) -> Mesh {
        let mut mesh = self.clone();
        for _ in 0..levels {
            mesh = mesh.refine();
        }
        mesh
    }

    /// Refine until at least `target` nodes, stopping early when the next
    /// level would exceed `cap` (dense spectral work stays tractable).
    pub fn refine_to(&self, target: usize, cap: usize) -> Mesh {
        let mut mesh = self.clone();
        while mesh.node_count() < target {
            let edges = mesh.edge_count();
            if mesh.node_count() + edges > cap {
                break;
            }
            mesh = mesh.refine();
        }
        mesh
    }

    pub(crate) fn edge_count(&self) -> usize {
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        edges.len()
    }
}
