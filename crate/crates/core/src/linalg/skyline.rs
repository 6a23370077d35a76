//! Profile (skyline) LDL^T factorization with reverse Cuthill-McKee ordering.
//!
//! The shifted pencils (K - sigma*M) arising from P1 meshes factor entirely
//! inside the RCM envelope, so no symbolic analysis beyond the row profile is
//! needed. Pivots are 1x1; the factorization is valid for indefinite shifts
//! as long as no pivot collapses, which the flux solver's guard band ensures.

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Reverse Cuthill-McKee ordering. Returns `order` with `order[new] = old`.
pub fn rcm_order(a: &CsrMatrix) -> Vec<usize> {
    let adj = a.adjacency();
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(|v| v.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let bfs_levels = |start: usize, visited: &[bool]| -> Vec<usize> {
        let mut seen = visited.to_vec();
        let mut frontier = vec![start];
        seen[start] = true;
        let mut last = frontier.clone();
        while !frontier.is_empty() {
            last = frontier.clone();
            let mut next = Vec::new();
            for &u in &frontier {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        last
    };

    while order.len() < n {
        // pseudo-peripheral start: min degree, then jump to the far level twice
        let mut start = (0..n)
            .filter(|&i| !visited[i])
            .min_by_key(|&i| degree[i])
            .unwrap();
        for _ in 0..2 {
            let last = bfs_levels(start, &visited);
            start = *last.iter().min_by_key(|&&i| degree[i]).unwrap();
        }
        // Cuthill-McKee BFS, neighbors by increasing degree
        let mut queue = std::collections::VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut nb: Vec<usize> = adj[u].iter().copied().filter(|&v| !visited[v]).collect();
            nb.sort_unstable_by_key(|&v| (degree[v], v));
            for v in nb {
                if !visited[v] {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    order.reverse();
    order
}

/// LDL^T factors stored in the row profile of the permuted matrix.
pub struct SkylineFactor {
    n: usize,
    /// order[new] = old
    order: Vec<usize>,
    first: Vec<usize>,
    offset: Vec<usize>,
    lvals: Vec<f64>,
    d: Vec<f64>,
}

impl SkylineFactor {
    /// Factor `a` using the node ordering `order` (`order[new] = old`).
    pub fn factor(a: &CsrMatrix, order: &[usize]) -> Result<Self> {
        let n = a.n;
        assert_eq!(order.len(), n);
        let mut inv = vec![0usize; n];
        for (newi, &old) in order.iter().enumerate() {
            inv[old] = newi;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for oi in 0..n {
            let ni = inv[oi];
            for k in a.row_ptr[oi]..a.row_ptr[oi + 1] {
                let nj = inv[a.col_idx[k]];
                let (lo, hi) = if nj < ni { (nj, ni) } else { (ni, nj) };
                if lo < first[hi] {
                    first[hi] = lo;
                }
            }
        }
        let mut offset = vec![0usize; n + 1];
        for i in 0..n {
            offset[i + 1] = offset[i] + (i - first[i]);
        }
        let mut lvals = vec![0.0f64; offset[n]];
        let mut d = vec![0.0f64; n];
        // scatter matrix values into the envelope
        for oi in 0..n {
            let ni = inv[oi];
            for k in a.row_ptr[oi]..a.row_ptr[oi + 1] {
                let nj = inv[a.col_idx[k]];
                if nj < ni {
                    lvals[offset[ni] + (nj - first[ni])] += a.values[k];
                } else if nj == ni {
                    d[ni] += a.values[k];
                }
            }
        }
        // in-place factorization; row i of L occupies lvals[offset[i]..offset[i+1]]
        let scale: f64 = d.iter().map(|x| x.abs()).sum::<f64>() / n as f64;
        let tiny = scale * 1e-20 + f64::MIN_POSITIVE;
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut sum = lvals[offset[i] + (j - fi)];
                if lo < j {
                    let ri = &lvals[offset[i] + (lo - fi)..offset[i] + (j - fi)];
                    let rj = &lvals[offset[j] + (lo - fj)..offset[j] + (j - fj)];
                    let mut acc = 0.0;
                    for (k, col) in (lo..j).enumerate() {
                        acc += ri[k] * d[col] * rj[k];
                    }
                    sum -= acc;
                }
                let lij = sum / d[j];
                lvals[offset[i] + (j - fi)] = lij;
            }
            let mut dii = d[i];
            for (k, col) in (fi..i).enumerate() {
                let l = lvals[offset[i] + k];
                dii -= l * l * d[col];
            }
            if dii.abs() < tiny {
                return Err(Error::SingularFactorization { index: i, pivot: dii });
            }
            d[i] = dii;
        }
        Ok(SkylineFactor { n, order: order.to_vec(), first, offset, lvals, d })
    }

    /// Number of negative pivots (matrix inertia below the shift).
    pub fn negative_pivots(&self) -> usize {
        self.d.iter().filter(|&&x| x < 0.0).count()
    }

    /// Solve A x = rhs.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut z = vec![0.0; n];
        for i in 0..n {
            z[i] = rhs[self.order[i]];
        }
        // L z' = z
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.lvals[self.offset[i]..self.offset[i + 1]];
            let mut acc = z[i];
            for (k, col) in (fi..i).enumerate() {
                acc -= row[k] * z[col];
            }
            z[i] = acc;
        }
        for i in 0..n {
            z[i] /= self.d[i];
        }
        // L^T x = z
        for i in (0..n).rev() {
            let fi = self.first[i];
            let zi = z[i];
            let row = &self.lvals[self.offset[i]..self.offset[i + 1]];
            for (k, col) in (fi..i).enumerate() {
                z[col] -= row[k] * zi;
            }
        }
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[self.order[i]] = z[i];
        }
        x
    }
}

/// A - shift*B over the union sparsity pattern.
pub fn shifted_combination(a: &CsrMatrix, b: &CsrMatrix, shift: f64) -> CsrMatrix {
    let mut triplets = Vec::with_capacity(a.values.len() + b.values.len());
    for i in 0..a.n {
        for k in a.row_ptr[i]..a.row_ptr[i + 1] {
            triplets.push((i, a.col_idx[k], a.values[k]));
        }
    }
    for i in 0..b.n {
        for k in b.row_ptr[i]..b.row_ptr[i + 1] {
            triplets.push((i, b.col_idx[k], -shift * b.values[k]));
        }
    }
    CsrMatrix::from_triplets(a.n, &triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_to_csr(m: &[&[f64]]) -> CsrMatrix {
        let n = m.len();
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if m[i][j] != 0.0 {
                    t.push((i, j, m[i][j]));
                }
            }
        }
        CsrMatrix::from_triplets(n, &t)
    }

    #[test]
    fn factor_solves_spd_system() {
        let a = dense_to_csr(&[
            &[4.0, 1.0, 0.0, 0.5],
            &[1.0, 3.0, 0.2, 0.0],
            &[0.0, 0.2, 5.0, 1.0],
            &[0.5, 0.0, 1.0, 2.0],
        ]);
        let order = rcm_order(&a);
        let f = SkylineFactor::factor(&a, &order).unwrap();
        let x_true = vec![1.0, -2.0, 0.5, 3.0];
        let rhs = a.matvec_alloc(&x_true);
        let x = f.solve(&rhs);
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-12);
        }
        assert_eq!(f.negative_pivots(), 0);
    }

    #[test]
    fn indefinite_shift_keeps_inertia() {
        let a = dense_to_csr(&[&[1.0, 0.0], &[0.0, -2.0]]);
        let order = vec![0, 1];
        let f = SkylineFactor::factor(&a, &order).unwrap();
        assert_eq!(f.negative_pivots(), 1);
        let x = f.solve(&[2.0, 2.0]);
        assert!((x[0] - 2.0).abs() < 1e-14 && (x[1] + 1.0).abs() < 1e-14);
    }
}
