//! One-sided Jacobi SVD (singular values plus right singular vectors) and a
//! cyclic Jacobi solver for symmetric eigenvalues.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::matrix::Matrix;

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order together with the matching right
/// singular vectors as the columns of `v`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    /// Right singular vectors whose singular value is at most
    /// `rel_cutoff * sigma_max`, as columns.
    pub fn null_space(&self, rel_cutoff: f64) -> Matrix {
        let cut = self.sigma.first().copied().unwrap_or(0.0) * rel_cutoff;
        let idx: Vec<usize> = (0..self.sigma.len()).filter(|&k| self.sigma[k] <= cut).collect();
        Matrix::from_fn(self.v.rows(), idx.len(), |i, j| self.v[(i, idx[j])])
    }

    pub fn rank(&self, rel_cutoff: f64) -> usize {
        let cut = self.sigma.first().copied().unwrap_or(0.0) * rel_cutoff;
        self.sigma.iter().filter(|&&s| s > cut).count()
    }
}

pub fn svd(a: &Matrix) -> Svd {
    let n = a.cols();
    // pad short matrices with zero rows so the column rotations see a full basis
    let mut u = if a.rows() >= n {
        a.clone()
    } else {
        Matrix::from_fn(n, n, |i, j| if i < a.rows() { a[(i, j)] } else { 0.0 })
    };
    let m = u.rows();
    let mut v = Matrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (x, y) = (u[(i, p)], u[(i, q)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * x - s * y;
                    u[(i, q)] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| (0..m).map(|i| u[(i, j)] * u[(i, j)]).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap_or(core::cmp::Ordering::Equal));
    Svd {
        sigma: order.iter().map(|&k| norms[k]).collect(),
        v: Matrix::from_fn(n, n, |i, j| v[(i, order[j])]),
    }
}

pub fn singular_values(a: &Matrix) -> Vec<f64> {
    svd(a).sigma
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &Matrix) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.symmetrized();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[(i, j)] * m[(i, j)]).sum();
        let diag: f64 = (0..n).map(|i| m[(i, i)] * m[(i, i)]).sum();
        if off <= 1e-32 * diag.max(f64::MIN_POSITIVE) || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    ev
}
