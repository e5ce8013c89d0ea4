//! Gaussian moments under the linear flow `ξ(t) = e^{At} ξ(0)`.
//!
//! Covariance convention: `σ_jk = ⟨{Δξ_j, Δξ_k}⟩/2`, so the vacuum has
//! `σ = I/2`.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::expm::expm;
use crate::matrix::Matrix;
use crate::quadform::{j_matrix, EomMatrix, QuadraticModel};
use crate::svd::symmetric_eigenvalues;
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    pub mean: Vec<f64>,
    pub covariance: Matrix,
}

impl GaussianState {
    pub fn vacuum(n_modes: usize) -> Self {
        GaussianState { mean: vec![0.0; 2 * n_modes], covariance: Matrix::identity(2 * n_modes).scale(0.5) }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    /// Mean occupation `n_j` of every mode.
    pub fn occupations(&self) -> Vec<f64> {
        let n = self.n_modes();
        let s = &self.covariance;
        (0..n)
            .map(|j| {
                let (x, p) = (self.mean[j], self.mean[n + j]);
                (s[(j, j)] + s[(n + j, n + j)] - 1.0) / 2.0 + (x * x + p * p) / 2.0
            })
            .collect()
    }

    /// Smallest eigenvalue of `σ + iJ/2`; nonnegative for a physical state.
    pub fn uncertainty_min_eig(&self) -> f64 {
        let m = self.covariance.rows();
        let j = j_matrix(m / 2).scale(0.5);
        // real form [[σ, −J/2], [J/2, σ]] of the Hermitian matrix
        let emb = Matrix::from_fn(2 * m, 2 * m, |r, c| match (r < m, c < m) {
            (true, true) => self.covariance[(r, c)],
            (false, false) => self.covariance[(r - m, c - m)],
            (true, false) => -j[(r, c - m)],
            (false, true) => j[(r - m, c)],
        });
        symmetric_eigenvalues(&emb).into_iter().fold(f64::INFINITY, f64::min)
    }

    fn check(&self, n_modes: usize) -> Result<()> {
        let m = 2 * n_modes;
        if self.mean.len() != m || self.covariance.rows() != m || self.covariance.cols() != m {
            return Err(Error::arg("state dimension does not match the model"));
        }
        Ok(())
    }
}

/// State at time `t`.
pub fn propagate(state: &GaussianState, eom: &EomMatrix, t: f64) -> Result<GaussianState> {
    state.check(eom.n_modes())?;
    if !t.is_finite() {
        return Err(Error::arg("time must be finite"));
    }
    let e = match expm(&eom.a().scale(t)) {
        Ok(e) if e.is_finite() => e,
        _ => return Err(Error::Diverged { last_finite_time: last_finite(eom, t) }),
    };
    let covariance = (&(&e * &state.covariance) * &e.transpose()).symmetrized();
    let mean = e.mul_vec(&state.mean);
    if !covariance.is_finite() || mean.iter().any(|x| !x.is_finite()) {
        return Err(Error::Diverged { last_finite_time: last_finite(eom, t) });
    }
    Ok(GaussianState { mean, covariance })
}

// bisect for the largest time with a finite exponential
fn last_finite(eom: &EomMatrix, t: f64) -> f64 {
    let ok = |s: f64| expm(&eom.a().scale(s)).map_or(false, |e| e.is_finite() && (&e * &e.transpose()).is_finite());
    let (mut lo, mut hi) = (0.0, t);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `n_j(t)` for every time in `t_grid`.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupationSeries {
    pub times: Vec<f64>,
    /// `rows[k][j]` is `n_j(times[k])`.
    pub rows: Vec<Vec<f64>>,
}

impl OccupationSeries {
    pub fn mode(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn max(&self) -> f64 {
        self.rows.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn occupation_series(model: &QuadraticModel, t_grid: &[f64], initial: &GaussianState) -> Result<OccupationSeries> {
    if t_grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::arg("times must be finite and nonnegative"));
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::arg("times must be sorted"));
    }
    let eom = model.eom()?;
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        rows.push(propagate(initial, &eom, t)?.occupations());
    }
    Ok(OccupationSeries { times: t_grid.to_vec(), rows })
}

/// Evenly spaced grid `0, t_max/steps, …, t_max`.
pub fn uniform_times(t_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| t_max * k as f64 / steps.max(1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::check_symplectic;

    fn model(n: usize, v: Matrix) -> QuadraticModel {
        QuadraticModel::new(n, v).unwrap()
    }

    #[test]
    fn free_rotation_keeps_vacuum() {
        let m = model(2, Matrix::from_diag(&[1.3, 0.7, 1.3, 0.7]));
        let s = occupation_series(&m, &uniform_times(20.0, 40), &GaussianState::vacuum(2)).unwrap();
        assert!(s.rows.iter().flatten().all(|n| n.abs() < 1e-12));
    }

    #[test]
    fn inverted_oscillator_matches_sinh() {
        // A = [[0, 2], [2, 0]]
        let m = model(1, Matrix::from_diag(&[-2.0, 2.0]));
        let times = uniform_times(2.0, 20);
        let s = occupation_series(&m, &times, &GaussianState::vacuum(1)).unwrap();
        for (t, row) in times.iter().zip(&s.rows) {
            let exact = (2.0 * t).sinh().powi(2);
            assert!((row[0] - exact).abs() <= 1e-10 * exact.max(1.0));
            assert!(row[0] >= (2.0 * t).sinh().powi(2) / 2.0 - 1e-12);
        }
    }

    #[test]
    fn coherent_mean_counts() {
        let st = GaussianState { mean: vec![1.0, 2.0], covariance: Matrix::identity(2).scale(0.5) };
        assert!((st.occupations()[0] - 2.5).abs() < 1e-15);
        assert!(st.uncertainty_min_eig().abs() < 1e-12);
    }

    #[test]
    fn propagation_is_symplectic_and_physical() {
        let v = Matrix::from_rows(&[
            [1.5, 1.8, 0.0, 0.0],
            [1.8, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.5, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        let m = model(2, v);
        let eom = m.eom().unwrap();
        for t in [0.5, 3.0, 7.0] {
            let e = expm(&eom.a().scale(t)).unwrap();
            assert!(check_symplectic(&e).unwrap().pass);
            assert!((e.det() - 1.0).abs() < 1e-8);
            let st = propagate(&GaussianState::vacuum(2), &eom, t).unwrap();
            assert!(st.uncertainty_min_eig() >= -1e-9 * st.covariance.norm_2().max(1.0));
            assert!(st.covariance.asymmetry() == 0.0);
        }
    }

    #[test]
    fn overflow_reports_last_finite_time() {
        let m = model(1, Matrix::from_diag(&[-2.0, 2.0]));
        let eom = m.eom().unwrap();
        match propagate(&GaussianState::vacuum(1), &eom, 1e4) {
            Err(Error::Diverged { last_finite_time }) => {
                assert!(last_finite_time > 100.0 && last_finite_time < 1e4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let m = model(1, Matrix::identity(2));
        let vac = GaussianState::vacuum(1);
        assert!(occupation_series(&m, &[1.0, 0.5], &vac).is_err());
        assert!(occupation_series(&m, &[-1.0], &vac).is_err());
        assert!(propagate(&GaussianState::vacuum(2), &m.eom().unwrap(), 1.0).is_err());
    }
}
