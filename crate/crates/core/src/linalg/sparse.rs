//! Compressed sparse row storage for the symmetric forms.

/// Symmetric sparse matrix in CSR layout. Both triangles are stored so that
/// matrix-vector products need no branching.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx: Vec<usize> = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut current_row = 0usize;
        for (i, j, v) in sorted {
            debug_assert!(i < n && j < n);
            if let (Some(&last_col), true) = (col_idx.last(), i == current_row && row_ptr[i] < col_idx.len()) {
                if last_col == j {
                    *values.last_mut().unwrap() += v;
                    continue;
                }
            }
            while current_row < i {
                current_row += 1;
                row_ptr[current_row] = col_idx.len();
            }
            col_idx.push(j);
            values.push(v);
        }
        while current_row < n {
            current_row += 1;
            row_ptr[current_row] = col_idx.len();
        }
        CsrMatrix { n, row_ptr, col_idx, values }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = acc;
        }
    }

    pub fn matvec_alloc(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        for k in self.row_ptr[i]..self.row_ptr[i + 1] {
            if self.col_idx[k] == j {
                return self.values[k];
            }
        }
        0.0
    }

    /// Row sums, used to check the constants-in-kernel property of stiffness
    /// matrices and partition-of-unity sums of mass matrices.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.values[self.row_ptr[i]..self.row_ptr[i + 1]].iter().sum())
            .collect()
    }

    /// y^T A x.
    pub fn bilinear(&self, y: &[f64], x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            let mut row = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                row += self.values[k] * x[self.col_idx[k]];
            }
            acc += y[i] * row;
        }
        acc
    }

    /// Undirected adjacency (excluding the diagonal) for ordering algorithms.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                if j != i {
                    adj[i].push(j);
                }
            }
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates() {
        let a = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 0, 4.0), (0, 1, 4.0), (1, 1, 5.0)]);
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.get(0, 1), 4.0);
        assert_eq!(a.get(1, 1), 5.0);
        let y = a.matvec_alloc(&[1.0, 2.0]);
        assert_eq!(y, vec![11.0, 14.0]);
    }
}
