//! Three-mode optomechanics: two cavity modes (detunings Δ₁, Δ₂) coupled to
//! one mechanical mode (frequency Ω). Quadrature order is
//! `(x₁, x₂, x_b, p₁, p₂, p_b)` and
//! `H = Σⱼ Δⱼ/2(pⱼ²+xⱼ²) + Ω/2(p_b²+x_b²) + 2Σⱼ(κⱼᵣ xⱼ + κⱼᵢ pⱼ) x_b`.
//!
//! For `Δ₁ = ±Δ₂` a passive or active mixing of the two cavities leaves a
//! spectator mode and a two-mode problem. The general case is settled by the
//! cubic characteristic polynomial of `A²`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::eig::eigenvalues;
use crate::error::Error;
use crate::matrix::Matrix;
use crate::optomech2::{build_two_mode, classify_two_mode, eps_case, stability_condition, TwoModeCase, TwoModeParams};
use crate::quadform::{congruence_transform, j_matrix, QuadraticModel, SymplecticMatrix};
use crate::spectral::{verdict_of_matrix, ModeKind};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeModeParams {
    pub delta1: f64,
    pub delta2: f64,
    pub omega: f64,
    pub kappa1: Complex64,
    pub kappa2: Complex64,
}

impl ThreeModeParams {
    pub fn new(delta1: f64, delta2: f64, omega: f64, kappa1: Complex64, kappa2: Complex64) -> Result<Self> {
        let p = ThreeModeParams { delta1, delta2, omega, kappa1, kappa2 };
        p.validate()?;
        Ok(p)
    }

    /// Real couplings `|κ₁|`, `|κ₂|`.
    pub fn real(delta1: f64, delta2: f64, omega: f64, k1: f64, k2: f64) -> Result<Self> {
        Self::new(delta1, delta2, omega, Complex64::new(k1, 0.0), Complex64::new(k2, 0.0))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::arg("Omega must be positive and finite"));
        }
        let finite = [self.delta1, self.delta2, self.kappa1.re, self.kappa1.im, self.kappa2.re, self.kappa2.im]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::arg("detunings and couplings must be finite"));
        }
        Ok(())
    }
}

/// Equation-of-motion matrix `A` of the three-mode model.
pub fn three_mode_eom(p: &ThreeModeParams) -> Result<Matrix> {
    p.validate()?;
    let (d1, d2, o) = (p.delta1, p.delta2, p.omega);
    let (k1r, k1i) = (2.0 * p.kappa1.re, 2.0 * p.kappa1.im);
    let (k2r, k2i) = (2.0 * p.kappa2.re, 2.0 * p.kappa2.im);
    Ok(Matrix::from_rows(&[
        [0.0, 0.0, k1i, d1, 0.0, 0.0],
        [0.0, 0.0, k2i, 0.0, d2, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, o],
        [-d1, 0.0, -k1r, 0.0, 0.0, 0.0],
        [0.0, -d2, -k2r, 0.0, 0.0, 0.0],
        [-k1r, -k2r, -o, -k1i, -k2i, 0.0],
    ]))
}

/// `V = −J A`.
pub fn build_three_mode(p: &ThreeModeParams) -> Result<QuadraticModel> {
    let a = three_mode_eom(p)?;
    let v = &(-&j_matrix(3)) * &a;
    QuadraticModel::new(3, v.symmetrized())
}

#[derive(Clone, Debug)]
pub struct ReducedTwoMode {
    pub s: i8,
    pub epsilon: i8,
    pub kappa_s: f64,
    pub s_c: SymplecticMatrix,
    pub spectator_frequency: f64,
    /// Parameters of the cavity–mechanics block after the transform.
    pub block: TwoModeParams,
    pub case: TwoModeCase,
    /// Closed-form stability condition on `(εΔ, κ_s)`.
    pub condition: bool,
    pub stable: bool,
}

#[derive(Clone, Debug)]
pub enum Reduction {
    Reduced(ReducedTwoMode),
    /// `s = −1` with `|κ₁| = |κ₂|`: no mixing transform exists.
    Degenerate(CubicClassification),
}

type C4 = [[Complex64; 4]; 4];

fn cmul(a: &C4, b: &C4) -> C4 {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

// transform on (a₁, a₂, a₁†, a₂†)
fn mixing_matrix(k1: Complex64, k2: Complex64, s: i8) -> C4 {
    let z = Complex64::new(0.0, 0.0);
    let (c1, c2) = (k1.conj(), k2.conj());
    let (a1, a2) = (k1.norm_sqr(), k2.norm_sqr());
    let (m, n) = if s > 0 {
        ([[c1, c2, z, z], [k2, -k1, z, z], [z, z, k1, k2], [z, z, c2, -c1]], (a1 + a2).sqrt())
    } else if a1 > a2 {
        ([[c1, z, z, k2], [z, c1, k2, z], [z, c2, k1, z], [c2, z, z, k1]], (a1 - a2).sqrt())
    } else {
        ([[z, c2, k1, z], [c2, z, z, k1], [c1, z, z, k2], [z, c1, k2, z]], (a2 - a1).sqrt())
    };
    let mut out = m;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x /= n;
        }
    }
    out
}

/// Real 6×6 symplectic form of the cavity mixing transform.
fn mixing_symplectic(k1: Complex64, k2: Complex64, s: i8) -> Result<SymplecticMatrix> {
    let m = mixing_matrix(k1, k2, s);
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let r = Complex64::new(h, 0.0);
    let i = Complex64::new(0.0, h);
    // (a, a†) = L (x, p)
    let l: C4 = [[r, z, i, z], [z, r, z, i], [r, z, -i, z], [z, r, z, -i]];
    let l_inv: C4 = [[r, z, r, z], [z, r, z, r], [-i, z, i, z], [z, -i, z, i]];
    let real = cmul(&l_inv, &cmul(&m, &l));
    let idx = [0usize, 1, 3, 4];
    let mut s_mat = Matrix::identity(6);
    for (a, &ia) in idx.iter().enumerate() {
        for (b, &ib) in idx.iter().enumerate() {
            if real[a][b].im.abs() > 1e-10 {
                return Err(Error::Internal("mixing transform is not real".into()));
            }
            s_mat[(ia, ib)] = real[a][b].re;
        }
    }
    SymplecticMatrix::new(s_mat)
}

/// Decouple one cavity combination when `Δ₁ = ±Δ₂`.
pub fn reduce_equal_detuning(p: &ThreeModeParams) -> Result<Reduction> {
    p.validate()?;
    let eps = eps_case(p.omega);
    if (p.delta1.abs() - p.delta2.abs()).abs() > eps {
        return Err(Error::arg("reduction needs |Delta1| = |Delta2|"));
    }
    let (a1, a2) = (p.kappa1.norm_sqr(), p.kappa2.norm_sqr());
    if a1 == 0.0 && a2 == 0.0 {
        return Err(Error::arg("reduction needs a nonzero coupling"));
    }
    let s: i8 = if (p.delta1 - p.delta2).abs() <= eps { 1 } else { -1 };
    if s < 0 && (p.kappa1.norm() - p.kappa2.norm()).abs() <= eps {
        return Ok(Reduction::Degenerate(cubic_classify(p)?));
    }
    let sum = a1 + f64::from(s) * a2;
    let epsilon: i8 = if sum > 0.0 { 1 } else { -1 };
    let kappa_s = sum.abs().sqrt();
    let delta = p.delta1;
    let e_delta = f64::from(epsilon) * delta;
    let spectator_frequency = f64::from(s) * e_delta;

    let s_c = mixing_symplectic(p.kappa1, p.kappa2, s)?;
    let model = build_three_mode(p)?;
    let w = congruence_transform(&model, &s_c)?;
    let block = TwoModeParams::new(e_delta, p.omega, Complex64::new(kappa_s, 0.0))?;
    let target = build_two_mode(&block)?;

    let wv = w.v();
    let keep = [0usize, 2, 3, 5];
    let spec = [1usize, 4];
    let mut err: f64 = 0.0;
    for (a, &ia) in keep.iter().enumerate() {
        for (b, &ib) in keep.iter().enumerate() {
            err = err.max((wv[(ia, ib)] - target.v()[(a, b)]).abs());
        }
        for &js in &spec {
            err = err.max(wv[(ia, js)].abs());
        }
    }
    err = err
        .max((wv[(1, 1)] - spectator_frequency).abs())
        .max((wv[(4, 4)] - spectator_frequency).abs())
        .max(wv[(1, 4)].abs());
    if err > 1e-9 * model.v().norm_fro().max(1.0) {
        return Err(Error::Internal(alloc::format!("mixing transform left residual {err:e}")));
    }

    let case = classify_two_mode(&block)?;
    let condition = stability_condition(&block);
    let stable = case.stable && spectator_frequency.abs() > eps;
    Ok(Reduction::Reduced(ReducedTwoMode {
        s,
        epsilon,
        kappa_s,
        s_c,
        spectator_frequency,
        block,
        case,
        condition,
        stable,
    }))
}

#[derive(Clone, Debug)]
pub struct CubicClassification {
    pub eta1: f64,
    pub eta2: f64,
    pub mu: f64,
    pub nu: f64,
    /// Present when the three roots are real.
    pub c: Option<[f64; 3]>,
    /// Roots of the cubic in `λ = (eigenvalue of A)²`.
    pub lambdas: [Complex64; 3],
    /// Row of the case table, 1..=8.
    pub case_id: u8,
    pub mode_kinds: [ModeKind; 3],
    pub stable: bool,
    /// Worst relative distance between `±√λ` and the eigensolver output.
    pub eigen_mismatch: f64,
    pub spectral_stable: bool,
    /// Unbounded modes (hyperbolic, lineal or zero) found by the eigensolver.
    pub spectral_unbounded: usize,
}

impl CubicClassification {
    /// Number of H entries in the case row.
    pub fn hyperbolic_pairs(&self) -> usize {
        HYPERBOLIC_COUNT[usize::from(self.case_id) - 1]
    }
}

const HYPERBOLIC_COUNT: [usize; 8] = [0, 1, 2, 3, 2, 3, 2, 3];

fn kinds_for(h: usize) -> [ModeKind; 3] {
    let mut out = [ModeKind::Circular; 3];
    for k in out.iter_mut().skip(3 - h) {
        *k = ModeKind::Hyperbolic;
    }
    out
}

fn match_error(lambdas: &[Complex64; 3], ev: &[Complex64], omega: f64) -> f64 {
    let mut want: Vec<Complex64> = Vec::with_capacity(6);
    for l in lambdas {
        let r = l.sqrt();
        want.push(r);
        want.push(-r);
    }
    let mut used = vec![false; ev.len()];
    let mut worst: f64 = 0.0;
    for w in want {
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, e) in ev.iter().enumerate() {
            if !used[i] {
                let d = (w - e).norm();
                if d < best.0 {
                    best = (d, i);
                }
            }
        }
        if best.1 == usize::MAX {
            return f64::INFINITY;
        }
        used[best.1] = true;
        worst = worst.max(best.0 / w.norm().max(omega));
    }
    worst
}

/// Closed-form classification of the general three-mode model.
pub fn cubic_classify(p: &ThreeModeParams) -> Result<CubicClassification> {
    p.validate()?;
    let (d1, d2, o) = (p.delta1, p.delta2, p.omega);
    let (a1, a2) = (p.kappa1.norm_sqr(), p.kappa2.norm_sqr());
    let o2 = o * o;
    let o3 = o2 * o;
    let eta1 = (2.0 * d1 * d1 - d2 * d2 - o2) / o2;
    let eta2 = (2.0 * d2 * d2 - d1 * d1 - o2) / o2;
    let cbrt4 = 2f64.powf(2.0 / 3.0);
    let mu = cbrt4 / 3.0 * (eta1 * eta1 + eta2 * eta2 + eta1 * eta2 + 36.0 * (d1 * a1 + d2 * a2) / o3);
    let nu = eta1 * eta2 * (eta1 + eta2) + 36.0 * (eta2 * d1 * a1 + eta1 * d2 * a2) / o3;
    let shift = eta1 + eta2 + 3.0;

    let disc = nu * nu - mu * mu * mu;
    let band = 1e-9 * (nu * nu).max((mu * mu * mu).abs()).max(1.0);
    let trig = |mu: f64| -> [f64; 3] {
        if mu <= 0.0 {
            return [-shift; 3];
        }
        let base = (nu / mu.powf(1.5)).clamp(-1.0, 1.0).acos();
        core::array::from_fn(|j| cbrt4 * mu.sqrt() * ((base - 2.0 * PI * j as f64) / 3.0).cos() - shift)
    };

    let a = three_mode_eom(p)?;
    let ev = eigenvalues(&a)?;
    let verdict = verdict_of_matrix(&a)?;

    let (c, lambdas, case_id) = if disc < -band {
        if mu <= 0.0 {
            return Err(Error::Internal("negative discriminant with mu <= 0".into()));
        }
        let c = trig(mu);
        let lambdas = c.map(|cj| Complex64::new(o2 * cj / 3.0, 0.0));
        let positive = c.iter().filter(|&&cj| cj >= 0.0).count();
        (Some(c), lambdas, 1 + positive as u8)
    } else if disc <= band {
        let c = trig(mu);
        let lambdas = c.map(|cj| Complex64::new(o2 * cj / 3.0, 0.0));
        let case_id = if c.iter().all(|&cj| cj < 0.0) && verdict.stable {
            1
        } else if 4.0 * nu < shift.powi(3) {
            5
        } else {
            6
        };
        (Some(c), lambdas, case_id)
    } else {
        let lambdas = explicit_roots(eta1, eta2, mu, nu, o2);
        let real = lambdas
            .iter()
            .min_by(|x, y| x.im.abs().total_cmp(&y.im.abs()))
            .copied()
            .unwrap_or_default();
        (None, lambdas, if real.re < 0.0 { 7 } else { 8 })
    };

    let stable = case_id == 1;
    let mode_kinds = kinds_for(HYPERBOLIC_COUNT[usize::from(case_id) - 1]);
    Ok(CubicClassification {
        eta1,
        eta2,
        mu,
        nu,
        c,
        lambdas,
        case_id,
        mode_kinds,
        stable,
        eigen_mismatch: match_error(&lambdas, &ev, o),
        spectral_stable: verdict.stable,
        spectral_unbounded: verdict.unbounded_modes(),
    })
}

/// Cardano roots in `λ`, valid for any sign of the discriminant except at
/// `ν = μ = 0`.
pub fn explicit_roots(eta1: f64, eta2: f64, mu: f64, nu: f64, o2: f64) -> [Complex64; 3] {
    let shift = 3.0 + eta1 + eta2;
    let w = Complex64::new(nu, 0.0) + Complex64::new(nu * nu - mu * mu * mu, 0.0).sqrt();
    if w.norm() < 1e-300 {
        return [Complex64::new(-o2 * shift / 3.0, 0.0); 3];
    }
    let cr = (w * 2.0).powf(1.0 / 3.0);
    let w23 = w.powf(2.0 / 3.0);
    let s3 = Complex64::new(0.0, 3f64.sqrt());
    let one = Complex64::new(1.0, 0.0);
    let l1 = -(shift - (w23 + mu) / cr) * (o2 / 3.0);
    let l2 = -((((one + s3) * mu + (one - s3) * w23) / (cr * 2.0)) + shift) * (o2 / 3.0);
    let l3 = -((((one - s3) * mu + (one + s3) * w23) / (cr * 2.0)) + shift) * (o2 / 3.0);
    [l1, l2, l3]
}

/// One grid point of a coupling sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub k1: f64,
    pub k2: f64,
    pub case_id: u8,
    pub stable: bool,
    pub max_re: f64,
}

pub fn sweep_point(delta1: f64, delta2: f64, omega: f64, k1: f64, k2: f64) -> Result<SweepPoint> {
    let p = ThreeModeParams::real(delta1, delta2, omega, k1, k2)?;
    let cls = cubic_classify(&p)?;
    let max_re = crate::spectral::max_real_part(&three_mode_eom(&p)?)?;
    Ok(SweepPoint { k1, k2, case_id: cls.case_id, stable: cls.stable, max_re })
}

/// Stability over a `(|κ₁|, |κ₂|)` grid; `points[i * k2.len() + j]` holds
/// `(k1[i], k2[j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityGrid {
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    pub points: Vec<SweepPoint>,
}

impl StabilityGrid {
    pub fn stable_at(&self, i: usize, j: usize) -> bool {
        self.points[i * self.k2.len() + j].stable
    }

    /// Stable/unstable switches along each fixed-`k1` column.
    pub fn column_sign_changes(&self) -> Vec<usize> {
        (0..self.k1.len())
            .map(|i| (1..self.k2.len()).filter(|&j| self.stable_at(i, j) != self.stable_at(i, j - 1)).count())
            .collect()
    }

    /// Grid cells where the verdict differs from a neighbour.
    pub fn boundary(&self) -> Vec<(f64, f64)> {
        let (n1, n2) = (self.k1.len(), self.k2.len());
        let mut out = Vec::new();
        for i in 0..n1 {
            for j in 0..n2 {
                let here = self.stable_at(i, j);
                let edge = (i + 1 < n1 && self.stable_at(i + 1, j) != here)
                    || (j + 1 < n2 && self.stable_at(i, j + 1) != here);
                if edge && here {
                    out.push((self.k1[i], self.k2[j]));
                }
            }
        }
        out
    }

    pub fn stable_count(&self) -> usize {
        self.points.iter().filter(|p| p.stable).count()
    }

    /// Number of 4-connected stable components.
    pub fn stable_components(&self) -> usize {
        let (n1, n2) = (self.k1.len(), self.k2.len());
        let mut seen = vec![false; n1 * n2];
        let mut count = 0;
        for start in 0..n1 * n2 {
            if seen[start] || !self.points[start].stable {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(k) = stack.pop() {
                let (i, j) = (k / n2, k % n2);
                let mut push = |ii: usize, jj: usize| {
                    let kk = ii * n2 + jj;
                    if !seen[kk] && self.points[kk].stable {
                        seen[kk] = true;
                        stack.push(kk);
                    }
                };
                if i > 0 {
                    push(i - 1, j);
                }
                if i + 1 < n1 {
                    push(i + 1, j);
                }
                if j > 0 {
                    push(i, j - 1);
                }
                if j + 1 < n2 {
                    push(i, j + 1);
                }
            }
        }
        count
    }
}

/// Sequential sweep over real couplings.
pub fn three_mode_sweep(delta1: f64, delta2: f64, omega: f64, k1: &[f64], k2: &[f64]) -> Result<StabilityGrid> {
    if k1.len() < 2 || k2.len() < 2 {
        return Err(Error::arg("sweep grid must be at least 2x2"));
    }
    let mut points = Vec::with_capacity(k1.len() * k2.len());
    for &a in k1 {
        for &b in k2 {
            points.push(sweep_point(delta1, delta2, omega, a, b)?);
        }
    }
    Ok(StabilityGrid { k1: k1.to_vec(), k2: k2.to_vec(), points })
}
