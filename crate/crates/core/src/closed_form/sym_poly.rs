//! Elementary symmetric polynomials of box half-lengths.

/// sigma_0..sigma_n of `vals`, built by prepending one variable at a time:
/// sigma_k <- sigma_k + a * sigma_{k-1}. All terms are nonnegative for
/// positive inputs, so the recurrence is stable.
pub fn elementary_symmetric(vals: &[f64]) -> Vec<f64> {
    let mut sigma = vec![0.0; vals.len() + 1];
    sigma[0] = 1.0;
    for (count, &a) in vals.iter().enumerate() {
        for k in (1..=count + 1).rev() {
            sigma[k] += a * sigma[k - 1];
        }
    }
    sigma
}

/// The three symmetric-polynomial families attached to half-lengths
/// a_1 >= ... >= a_n: sigma_k over all of them, d_k over (a_2..a_n), and
/// the normalized e_k = d_k / a_1^k.
#[derive(Debug, Clone)]
pub struct SymPolyBundle {
    pub sigma: Vec<f64>,
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymPolyBundle {
    pub fn from_half_lengths(half_lengths: &[f64]) -> Self {
        let sigma = elementary_symmetric(half_lengths);
        let d = elementary_symmetric(&half_lengths[1..]);
        let a1 = half_lengths[0];
        let e = d.iter().enumerate().map(|(k, &dk)| dk / a1.powi(k as i32)).collect();
        SymPolyBundle { sigma, d, e }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> f64 {
        let mut v = 1.0;
        for i in 0..k {
            v = v * (n - i) as f64 / (i + 1) as f64;
        }
        v
    }

    #[test]
    fn unit_square_values() {
        let b = SymPolyBundle::from_half_lengths(&[1.0, 1.0]);
        assert_eq!(b.sigma, vec![1.0, 2.0, 1.0]);
        assert_eq!(b.d, vec![1.0, 1.0]);
        assert_eq!(b.e, vec![1.0, 1.0]);
    }

    #[test]
    fn prepend_identities() {
        // sigma_n = a1 d_{n-1}; sigma_k = d_k + a1 d_{k-1}
        let a = [3.0, 2.0, 1.0];
        let b = SymPolyBundle::from_half_lengths(&a);
        let n = a.len();
        assert!((b.sigma[n] - a[0] * b.d[n - 1]).abs() < 1e-12);
        assert!((b.sigma[3] - 6.0).abs() < 1e-12);
        for k in 1..n {
            assert!((b.sigma[k] - (b.d[k] + a[0] * b.d[k - 1])).abs() < 1e-12 * b.sigma[k].abs());
        }
    }

    #[test]
    fn maclaurin_chain_is_nonincreasing() {
        for a in [vec![2.0, 1.0], vec![5.0, 3.0, 0.5], vec![2.0, 1.9, 1.7, 0.2]] {
            let s = elementary_symmetric(&a);
            let n = a.len();
            let means: Vec<f64> = (1..=n).map(|k| (s[k] / binom(n, k)).powf(1.0 / k as f64)).collect();
            for w in means.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12));
            }
        }
        // instance: a = (2,1): sigma_1/2 >= sqrt(sigma_2)
        let s = elementary_symmetric(&[2.0, 1.0]);
        assert!(s[1] / 2.0 >= s[2].sqrt());
    }
}
