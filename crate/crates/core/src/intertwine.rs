//! Numerical construction of a symplectic S with `S⁻ᵀ V S⁻¹ = W` for a
//! prescribed target W.
//!
//! `T = S⁻¹` must satisfy `JV·T = T·JW`, a linear condition. The solution
//! space is searched for a member with `TᵀJT = J` by Levenberg–Marquardt
//! from deterministic random starts.

use alloc::vec::Vec;

use crate::error::Error;
#[allow(unused_imports)]
use num_traits::Float;
use crate::matrix::Matrix;
use crate::quadform::{j_matrix, SymplecticMatrix, TOL_SYMP};
use crate::svd::svd;
use crate::Result;

pub(crate) struct SplitMix64(u64);

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [−1, 1).
    pub(crate) fn next_signed(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

fn combine(basis: &[Matrix], c: &[f64]) -> Matrix {
    let m = basis[0].rows();
    let mut t = Matrix::zeros(m, m);
    for (b, &ck) in basis.iter().zip(c) {
        t = &t + &b.scale(ck);
    }
    t
}

// upper-triangle entries of TᵀJT − J
fn residual(t: &Matrix, j: &Matrix) -> Vec<f64> {
    let r = &(&t.transpose() * &(j * t)) - j;
    let m = r.rows();
    let mut out = Vec::with_capacity(m * (m - 1) / 2);
    for a in 0..m {
        for b in a + 1..m {
            out.push(r[(a, b)]);
        }
    }
    out
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Find a symplectic S with `S⁻ᵀ V S⁻¹ = W`.
pub(crate) fn intertwine(v: &Matrix, w: &Matrix, seed: u64) -> Result<SymplecticMatrix> {
    let m = v.rows();
    let n = m / 2;
    let j = j_matrix(n);
    let a = &j * v;
    let b = &j * w;

    // linear operator T ↦ AT − TB on row-major vec(T)
    let op = Matrix::from_fn(m * m, m * m, |row, col| {
        let (p, q) = (row / m, row % m);
        let (i, k) = (col / m, col % m);
        let mut x = 0.0;
        if q == k {
            x += a[(p, i)];
        }
        if p == i {
            x -= b[(k, q)];
        }
        x
    });
    let dec = svd(&op);
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    let mut dim = dec.sigma.iter().filter(|&&s| s <= 1e-8 * smax.max(1.0)).count();
    dim = dim.max(m);
    let total = m * m;
    let basis: Vec<Matrix> = (total - dim..total)
        .map(|c| Matrix::from_fn(m, m, |i, k| dec.v[(i * m + k, c)]))
        .collect();

    let mut rng = SplitMix64::new(seed);
    let mut best: Option<(f64, Matrix)> = None;
    for _ in 0..64 {
        let mut c: Vec<f64> = (0..dim).map(|_| rng.next_signed()).collect();
        let mut mu = 1e-3;
        let mut r = residual(&combine(&basis, &c), &j);
        let mut cost = norm(&r);
        for _ in 0..200 {
            if cost < 1e-14 {
                break;
            }
            let t = combine(&basis, &c);
            // Jacobian columns: N_kᵀJT + TᵀJN_k
            let cols: Vec<Vec<f64>> = basis
                .iter()
                .map(|nk| {
                    let d = &(&nk.transpose() * &(&j * &t)) + &(&t.transpose() * &(&j * nk));
                    let mut out = Vec::new();
                    for p in 0..m {
                        for q in p + 1..m {
                            out.push(d[(p, q)]);
                        }
                    }
                    out
                })
                .collect();
            let jtj = Matrix::from_fn(dim, dim, |p, q| cols[p].iter().zip(&cols[q]).map(|(x, y)| x * y).sum());
            let jtr: Vec<f64> = cols.iter().map(|col| -col.iter().zip(&r).map(|(x, y)| x * y).sum::<f64>()).collect();
            let mut improved = false;
            for _ in 0..20 {
                let mut damped = jtj.clone();
                for p in 0..dim {
                    damped[(p, p)] += mu * (1.0 + jtj[(p, p)]);
                }
                let Some(lu) = damped.lu() else {
                    mu *= 10.0;
                    continue;
                };
                let step = lu.solve_vec(&jtr);
                let trial: Vec<f64> = c.iter().zip(&step).map(|(x, s)| x + s).collect();
                let tr = residual(&combine(&basis, &trial), &j);
                let tc = norm(&tr);
                if tc < cost {
                    c = trial;
                    r = tr;
                    cost = tc;
                    mu = (mu * 0.3).max(1e-15);
                    improved = true;
                    break;
                }
                mu *= 10.0;
            }
            if !improved {
                break;
            }
        }
        let t = combine(&basis, &c);
        if best.as_ref().map_or(true, |(bc, _)| cost < *bc) {
            best = Some((cost, t));
        }
        if cost < 1e-13 {
            break;
        }
    }
    let (cost, t) = best.ok_or_else(|| Error::Internal("no intertwiner candidates".into()))?;
    if !(cost < TOL_SYMP) {
        return Err(Error::numeric("symplectic intertwiner search did not converge", None));
    }
    let s = t.inverse().ok_or_else(|| Error::numeric("intertwiner is singular", None))?;
    SymplecticMatrix::new(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::{congruence_transform, QuadraticModel};

    #[test]
    fn recovers_oscillator_rotation() {
        // V = diag(4, 1): ω = 2, target W = diag(2, 2)
        let v = Matrix::from_diag(&[4.0, 1.0]);
        let w = Matrix::from_diag(&[2.0, 2.0]);
        let s = intertwine(&v, &w, 7).unwrap();
        let m = QuadraticModel::new(1, v).unwrap();
        let out = congruence_transform(&m, &s).unwrap();
        assert!((out.v() - &w).max_abs() < 1e-10);
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(3);
        let mut b = SplitMix64::new(3);
        let xs: Vec<f64> = (0..5).map(|_| a.next_signed()).collect();
        let ys: Vec<f64> = (0..5).map(|_| b.next_signed()).collect();
        assert_eq!(xs, ys);
        assert!(xs.iter().all(|x| (-1.0..1.0).contains(x)));
    }
}
