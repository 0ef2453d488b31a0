//! Dense symmetric eigenvalue kernels.
//!
//! Two solvers cover every matrix this crate produces: an implicit-shift QL
//! iteration for symmetric tridiagonal matrices (the parity blocks of the
//! discretized operators) and a cyclic Jacobi sweep for small dense symmetric
//! matrices (Gram matrices, and a test oracle for the tridiagonal path).

use crate::error::{Error, Result};

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples rows i and i+1), sorted ascending.
pub fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n, "off-diagonal length must be n - 1");
    if n == 1 {
        return Ok(vec![diag[0]]);
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::EigenConvergence);
            }
            // Implicit Wilkinson-style shift.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Eigenvalues of a dense symmetric matrix (row-major, n x n) by cyclic
/// Jacobi rotations, sorted ascending. Intended for small n.
pub fn jacobi_eigenvalues(matrix: &[f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(matrix.len(), n * n);
    let mut a = matrix.to_vec();
    for p in 0..n {
        for q in 0..n {
            let gap = (a[p * n + q] - a[q * n + p]).abs();
            let scale = a[p * n + q].abs().max(1.0);
            assert!(gap <= 1e-12 * scale, "matrix must be symmetric");
        }
    }

    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        let scale: f64 = (0..n).map(|i| a[i * n + i].abs()).fold(1e-300, f64::max);
        if off.sqrt() <= 1e-15 * scale * n as f64 {
            let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(eigs);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::EigenConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Splitmix-style deterministic pseudo-random stream for test matrices.
    struct Rng(u64);
    impl Rng {
        fn next_f64(&mut self) -> f64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z = z ^ (z >> 31);
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        }
    }

    #[test]
    fn tridiagonal_dirichlet_laplacian_is_analytic() {
        // -u'' on (0, pi) with Dirichlet ends, h = pi/(n+1): eigenvalues
        // (2 - 2cos(k h)) / h^2.
        let n = 40;
        let h = std::f64::consts::PI / (n as f64 + 1.0);
        let diag = vec![2.0 / (h * h); n];
        let off = vec![-1.0 / (h * h); n - 1];
        let eigs = tridiag_eigenvalues(&diag, &off).unwrap();
        for (k, &lam) in eigs.iter().enumerate() {
            let exact = (2.0 - 2.0 * ((k as f64 + 1.0) * h).cos()) / (h * h);
            assert!((lam - exact).abs() < 1e-9 * exact.max(1.0), "k = {k}");
        }
    }

    #[test]
    fn tridiagonal_matches_dense_jacobi_on_random_matrices() {
        let mut rng = Rng(7);
        for trial in 0..20 {
            let n = 3 + trial % 9;
            let diag: Vec<f64> = (0..n).map(|_| 4.0 * rng.next_f64()).collect();
            let off: Vec<f64> = (0..n - 1).map(|_| 4.0 * rng.next_f64()).collect();
            let mut dense = vec![0.0; n * n];
            for i in 0..n {
                dense[i * n + i] = diag[i];
            }
            for i in 0..n - 1 {
                dense[i * n + i + 1] = off[i];
                dense[(i + 1) * n + i] = off[i];
            }
            let a = tridiag_eigenvalues(&diag, &off).unwrap();
            let b = jacobi_eigenvalues(&dense, n).unwrap();
            for i in 0..n {
                assert!((a[i] - b[i]).abs() < 1e-11, "n = {n}, i = {i}");
            }
        }
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // Diagonal 1..4 conjugated by a rotation in the (0, 3) plane.
        let n = 4;
        let (c, s) = (0.8, 0.6);
        let mut a = vec![0.0; 16];
        let d = [1.0, 2.0, 3.0, 4.0];
        // R diag R^T with R the plane rotation.
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    let rik = rot(i, k, c, s);
                    let rjk = rot(j, k, c, s);
                    acc += rik * d[k] * rjk;
                }
                a[i * n + j] = acc;
            }
        }
        let eigs = jacobi_eigenvalues(&a, n).unwrap();
        for (i, want) in d.iter().enumerate() {
            assert!((eigs[i] - want).abs() < 1e-13);
        }
    }

    fn rot(i: usize, j: usize, c: f64, s: f64) -> f64 {
        match (i, j) {
            (0, 0) => c,
            (0, 3) => -s,
            (3, 0) => s,
            (3, 3) => c,
            (a, b) if a == b => 1.0,
            _ => 0.0,
        }
    }

    #[test]
    fn single_element_matrix() {
        assert_eq!(tridiag_eigenvalues(&[5.0], &[]).unwrap(), vec![5.0]);
    }
}
