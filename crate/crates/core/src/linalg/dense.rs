//! Small dense symmetric eigensolvers and least-squares fits.
//!
//! These back the Rayleigh-Ritz step of the subspace iteration (matrices of
//! dimension <= a few dozen) and the dyadic extrapolation fits, so plain
//! cyclic Jacobi and normal equations are entirely adequate.

/// Column-major dense symmetric matrix helpers operate on `Vec<Vec<f64>>`
/// where `m[i][j]` is row i, column j.
pub type DenseMat = Vec<Vec<f64>>;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Returns eigenvalues ascending and eigenvectors as columns
/// (`vectors[i][j]` = component i of eigenvector j).
pub fn jacobi_eigh(a: &DenseMat) -> (Vec<f64>, DenseMat) {
    let n = a.len();
    let mut m: DenseMat = a.clone();
    let mut v: DenseMat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let off = |m: &DenseMat| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += m[i][j] * m[i][j];
            }
        }
        s
    };
    let norm: f64 = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..100 {
        if off(&m).sqrt() <= 1e-15 * norm {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p][q];
                if apq.abs() <= 1e-18 * norm {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap());
    let values: Vec<f64> = idx.iter().map(|&i| m[i][i]).collect();
    let vectors: DenseMat = (0..n)
        .map(|row| idx.iter().map(|&col| v[row][col]).collect())
        .collect();
    (values, vectors)
}

/// Generalized symmetric problem H y = theta G y for small G ~ I.
/// Returns ascending eigenvalues and full-basis eigenvectors (columns).
pub fn generalized_small(h: &DenseMat, g: &DenseMat) -> (Vec<f64>, DenseMat) {
    let n = h.len();
    let (gvals, gvecs) = jacobi_eigh(g);
    // G^{-1/2} = Q diag(1/sqrt(lam)) Q^T; G is a Gram matrix, so positive
    let mut gis: DenseMat = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += gvecs[i][k] * gvecs[j][k] / gvals[k].max(1e-300).sqrt();
            }
            gis[i][j] = acc;
        }
    }
    // C = G^{-1/2} H G^{-1/2}
    let mut tmp = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            tmp[i][j] = (0..n).map(|k| gis[i][k] * h[k][j]).sum();
        }
    }
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            c[i][j] = (0..n).map(|k| tmp[i][k] * gis[k][j]).sum();
        }
    }
    // resymmetrize against roundoff
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (c[i][j] + c[j][i]);
            c[i][j] = avg;
            c[j][i] = avg;
        }
    }
    let (vals, z) = jacobi_eigh(&c);
    let mut y = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            y[i][j] = (0..n).map(|k| gis[i][k] * z[k][j]).sum();
        }
    }
    (vals, y)
}

/// Solve a small dense linear system by Gaussian elimination with partial
/// pivoting. Panics on exactly singular input (callers control conditioning).
pub fn solve_small(a: &DenseMat, rhs: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.clone();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap()).unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        assert!(m[col][col] != 0.0, "singular small system");
        for row in (col + 1)..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x
}

/// Least-squares polynomial fit of given degree; returns coefficients in
/// increasing powers. Abscissae are normalized internally for conditioning.
pub fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Vec<f64> {
    assert!(x.len() == y.len() && x.len() > degree);
    let scale = x.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(1e-300);
    let xs: Vec<f64> = x.iter().map(|&v| v / scale).collect();
    let m = degree + 1;
    let mut ata = vec![vec![0.0; m]; m];
    let mut atb = vec![0.0; m];
    for (xi, yi) in xs.iter().zip(y) {
        let mut pow = vec![1.0; m];
        for p in 1..m {
            pow[p] = pow[p - 1] * xi;
        }
        for i in 0..m {
            atb[i] += pow[i] * yi;
            for j in 0..m {
                ata[i][j] += pow[i] * pow[j];
            }
        }
    }
    let c = solve_small(&ata, &atb);
    c.iter().enumerate().map(|(p, &v)| v / scale.powi(p as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_recovers_known_spectrum() {
        let a = vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 1.0, 2.0]];
        let (vals, vecs) = jacobi_eigh(&a);
        let rt2 = std::f64::consts::SQRT_2;
        let expect = [2.0 - rt2, 2.0, 2.0 + rt2];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-13);
        }
        // residual check A v = lambda v
        for j in 0..3 {
            for i in 0..3 {
                let av: f64 = (0..3).map(|k| a[i][k] * vecs[k][j]).sum();
                assert!((av - vals[j] * vecs[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn polyfit_matches_exact_quadratic() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.5];
        let y: Vec<f64> = x.iter().map(|&t| 3.0 - 2.0 * t + 0.5 * t * t).collect();
        let c = polyfit(&x, &y, 2);
        assert!((c[0] - 3.0).abs() < 1e-10 && (c[1] + 2.0).abs() < 1e-10 && (c[2] - 0.5).abs() < 1e-10);
    }
}
