//! Spectral classification of `A = JV` and the stability verdict.
//!
//! Eigenvalues of a Hamiltonian matrix come in orbits `{λ, −λ, λ*, −λ*}`.
//! Each orbit is one [`EigenClass`]. The system is stable exactly when every
//! class is an imaginary pair and every eigenvalue is semisimple.
//!
//! Defective eigenvalues split under rounding into a small ring of radius
//! roughly `u^(1/k)` for a block of size `k`, so clustering uses a radius that
//! grows with the cluster size. Cluster means stay accurate even when the
//! individual members are not.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::eig::eigenvalues;
use crate::error::Error;
use crate::expm::expm;
use crate::matrix::Matrix;
use crate::quadform::{congruence_transform, EomMatrix, QuadraticModel, SymplecticMatrix};
use crate::svd::svd;
use crate::Result;

/// Relative singular-value cutoff for numerical rank.
pub const RANK_CUTOFF: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EigenKind {
    RealPair,
    ImaginaryPair,
    ComplexQuadruplet,
    Zero,
}

/// One eigenvalue orbit. `value` is the representative with non-negative
/// real and imaginary parts; multiplicities count every member of the orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenClass {
    pub kind: EigenKind,
    pub value: Complex64,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
}

impl EigenClass {
    pub fn is_diagonalizable(&self) -> bool {
        self.geometric_multiplicity == self.algebraic_multiplicity
    }

    /// Number of modes this orbit accounts for.
    pub fn modes(&self) -> usize {
        self.algebraic_multiplicity / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeKind {
    Circular,
    Hyperbolic,
    Lineal,
    ZeroMode,
}

impl ModeKind {
    pub fn is_unbounded(self) -> bool {
        !matches!(self, ModeKind::Circular)
    }

    pub fn name(self) -> &'static str {
        match self {
            ModeKind::Circular => "circular",
            ModeKind::Hyperbolic => "hyperbolic",
            ModeKind::Lineal => "lineal",
            ModeKind::ZeroMode => "zero",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub classes: Vec<EigenClass>,
    pub mode_kinds: Vec<ModeKind>,
    pub reason: String,
}

impl StabilityVerdict {
    pub fn count(&self, kind: ModeKind) -> usize {
        self.mode_kinds.iter().filter(|&&k| k == kind).count()
    }

    pub fn unbounded_modes(&self) -> usize {
        self.mode_kinds.iter().filter(|k| k.is_unbounded()).count()
    }
}

/// A group of numerically coincident eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub mean: Complex64,
    pub size: usize,
    pub members: Vec<Complex64>,
}

/// `ε_class = 1e−8·max(1, ‖A‖₂)`.
pub fn class_tolerance(a: &Matrix) -> f64 {
    1e-8 * a.norm_2().max(1.0)
}

fn cluster_radius(scale: f64, k: usize) -> f64 {
    let k = k.max(1) as f64;
    scale * 1e-8f64.max(1e-13f64.powf(1.0 / k))
}

/// Eigenvalues of `a` grouped into clusters of numerically equal values.
pub fn eigen_clusters(a: &Matrix) -> Result<Vec<Cluster>> {
    let ev = eigenvalues(a)?;
    Ok(cluster_values(&ev, a.norm_2().max(1.0)))
}

pub(crate) fn cluster_values(ev: &[Complex64], scale: f64) -> Vec<Cluster> {
    let idx: Vec<usize> = (0..ev.len()).collect();
    let mut groups = Vec::new();
    split(ev, &idx, ev.len().max(1), scale, &mut groups);
    let mut out: Vec<Cluster> = groups
        .into_iter()
        .map(|g| {
            let members: Vec<Complex64> = g.iter().map(|&i| ev[i]).collect();
            let mean = members.iter().fold(Complex64::new(0.0, 0.0), |s, z| s + z) / members.len() as f64;
            Cluster { mean, size: members.len(), members }
        })
        .collect();
    out.sort_by(|a, b| cmp_complex(&a.mean, &b.mean));
    out
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal).then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

fn split(ev: &[Complex64], idx: &[usize], level: usize, scale: f64, out: &mut Vec<Vec<usize>>) {
    let thr = cluster_radius(scale, level);
    for comp in components(ev, idx, thr) {
        let m = comp.len();
        if m == 1 {
            out.push(comp);
            continue;
        }
        let mean = comp.iter().fold(Complex64::new(0.0, 0.0), |s, &i| s + ev[i]) / m as f64;
        let spread = comp.iter().map(|&i| (ev[i] - mean).norm()).fold(0.0, f64::max);
        if spread <= cluster_radius(scale, m) {
            out.push(comp);
            continue;
        }
        let next = m.min(level).saturating_sub(1);
        if next == 0 {
            out.extend(comp.into_iter().map(|i| vec![i]));
        } else {
            split(ev, &comp, next, scale, out);
        }
    }
}

// single-linkage connected components at distance `thr`
fn components(ev: &[Complex64], idx: &[usize], thr: f64) -> Vec<Vec<usize>> {
    let n = idx.len();
    let mut label = vec![usize::MAX; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        label[start] = id;
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(idx[u]);
            for v in 0..n {
                if label[v] == usize::MAX && (ev[idx[u]] - ev[idx[v]]).norm() <= thr {
                    label[v] = id;
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Dimension of the kernel of `A − pI` (complex `p` allowed).
pub fn nullity(a: &Matrix, p: Complex64, real_tol: f64) -> usize {
    let n = a.rows();
    if p.im.abs() <= real_tol {
        let m = Matrix::from_fn(n, n, |i, j| a[(i, j)] - if i == j { p.re } else { 0.0 });
        let s = svd(&m);
        n - s.rank(RANK_CUTOFF)
    } else {
        // real representation [[Mr, −Mi], [Mi, Mr]] of M = A − pI
        let m = Matrix::from_fn(2 * n, 2 * n, |i, j| {
            let (bi, bj) = (i / n, j / n);
            let (r, c) = (i % n, j % n);
            let mr = a[(r, c)] - if r == c { p.re } else { 0.0 };
            let mi = if r == c { -p.im } else { 0.0 };
            match (bi, bj) {
                (0, 0) | (1, 1) => mr,
                (0, 1) => -mi,
                _ => mi,
            }
        });
        let s = svd(&m);
        (2 * n - s.rank(RANK_CUTOFF) + 1) / 2
    }
}

/// Group the eigenvalues of `A` into orbit classes with multiplicities.
pub fn classify_spectrum(eom: &EomMatrix) -> Result<Vec<EigenClass>> {
    classify_matrix(eom.a())
}

pub(crate) fn classify_matrix(a: &Matrix) -> Result<Vec<EigenClass>> {
    let scale = a.norm_2().max(1.0);
    let eps = 1e-8 * scale;
    let ev = eigenvalues(a)?;
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::numeric("non-finite eigenvalue", Some(a.clone())));
    }
    let clusters = cluster_values(&ev, scale);

    // fold each cluster onto the first quadrant and group orbit partners
    let fold = |z: Complex64| Complex64::new(z.re.abs(), z.im.abs());
    let group_tol = 1e-7 * scale;
    let mut orbits: Vec<(Complex64, Vec<usize>)> = Vec::new();
    for (ci, c) in clusters.iter().enumerate() {
        let f = fold(c.mean);
        match orbits.iter_mut().find(|(rep, _)| (*rep - f).norm() <= group_tol) {
            Some((_, members)) => members.push(ci),
            None => orbits.push((f, vec![ci])),
        }
    }

    let mut classes = Vec::with_capacity(orbits.len());
    for (_, members) in orbits {
        let alg: usize = members.iter().map(|&ci| clusters[ci].size).sum();
        let value = members.iter().fold(Complex64::new(0.0, 0.0), |s, &ci| s + fold(clusters[ci].mean) * clusters[ci].size as f64)
            / alg as f64;
        let kind = if value.norm() <= eps {
            EigenKind::Zero
        } else if value.im <= eps {
            EigenKind::RealPair
        } else if value.re <= eps {
            EigenKind::ImaginaryPair
        } else {
            EigenKind::ComplexQuadruplet
        };
        let value = match kind {
            EigenKind::Zero => Complex64::new(0.0, 0.0),
            EigenKind::RealPair => Complex64::new(value.re, 0.0),
            EigenKind::ImaginaryPair => Complex64::new(0.0, value.im),
            EigenKind::ComplexQuadruplet => value,
        };
        let geo: usize = members
            .iter()
            .map(|&ci| {
                let c = &clusters[ci];
                let p = match kind {
                    EigenKind::Zero => Complex64::new(0.0, 0.0),
                    EigenKind::RealPair => Complex64::new(c.mean.re, 0.0),
                    EigenKind::ImaginaryPair => Complex64::new(0.0, c.mean.im),
                    EigenKind::ComplexQuadruplet => c.mean,
                };
                nullity(a, p, eps).clamp(1, c.size)
            })
            .sum();
        classes.push(EigenClass { kind, value, algebraic_multiplicity: alg, geometric_multiplicity: geo.min(alg) });
    }
    classes.sort_by(|a, b| {
        a.kind.cmp(&b.kind).then(b.value.norm().partial_cmp(&a.value.norm()).unwrap_or(Ordering::Equal))
    });
    Ok(classes)
}

fn mode_kinds_of(classes: &[EigenClass]) -> Vec<ModeKind> {
    let mut kinds = Vec::new();
    for c in classes {
        let modes = c.modes();
        let defect = c.algebraic_multiplicity - c.geometric_multiplicity;
        match c.kind {
            EigenKind::ImaginaryPair => {
                let lineal = defect.min(modes);
                kinds.extend(core::iter::repeat(ModeKind::Lineal).take(lineal));
                kinds.extend(core::iter::repeat(ModeKind::Circular).take(modes - lineal));
            }
            EigenKind::RealPair | EigenKind::ComplexQuadruplet => {
                kinds.extend(core::iter::repeat(ModeKind::Hyperbolic).take(modes));
            }
            EigenKind::Zero => {
                let lineal = defect.min(modes);
                kinds.extend(core::iter::repeat(ModeKind::Lineal).take(lineal));
                kinds.extend(core::iter::repeat(ModeKind::ZeroMode).take(modes - lineal));
            }
        }
    }
    kinds
}

/// Stable iff every class is a semisimple imaginary pair.
pub fn is_dynamically_stable(eom: &EomMatrix) -> Result<StabilityVerdict> {
    verdict_of_matrix(eom.a())
}

pub(crate) fn verdict_of_matrix(a: &Matrix) -> Result<StabilityVerdict> {
    let classes = classify_matrix(a)?;
    let mode_kinds = mode_kinds_of(&classes);
    let stable = classes.iter().all(|c| c.kind == EigenKind::ImaginaryPair && c.is_diagonalizable());
    let reason = if stable {
        String::from("diagonalizable with purely imaginary spectrum")
    } else {
        let mut parts = Vec::new();
        for c in &classes {
            let txt = match c.kind {
                EigenKind::RealPair => format!("real pair ±{:.6}", c.value.re),
                EigenKind::ComplexQuadruplet => format!("complex quadruplet ±{:.6}±{:.6}i", c.value.re, c.value.im),
                EigenKind::Zero if c.is_diagonalizable() => String::from("zero eigenvalue (zero mode)"),
                EigenKind::Zero => format!(
                    "defective zero eigenvalue (algebraic {}, geometric {})",
                    c.algebraic_multiplicity, c.geometric_multiplicity
                ),
                EigenKind::ImaginaryPair if !c.is_diagonalizable() => format!(
                    "defective imaginary pair ±{:.6}i (algebraic {}, geometric {})",
                    c.value.im, c.algebraic_multiplicity, c.geometric_multiplicity
                ),
                EigenKind::ImaginaryPair => continue,
            };
            parts.push(txt);
        }
        parts.join("; ")
    };
    Ok(StabilityVerdict { stable, classes, mode_kinds, reason })
}

/// Largest real part among the eigenvalues of `A`.
pub fn max_real_part(a: &Matrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Smallest |Re λ| over the eigenvalues of `A`.
pub fn min_distance_to_imaginary_axis(a: &Matrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundedness {
    Bounded,
    Diverging,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub verdict: Boundedness,
    /// Least-squares slope of `ln‖exp(At)‖₂` against t; `+∞` on overflow.
    pub rate: f64,
    /// `‖exp(A t_max)‖₂`, `+∞` on overflow.
    pub final_norm: f64,
}

/// Independent check of boundedness by sampling the propagator norm on a
/// log-spaced time grid ending at `t_max`.
pub fn boundedness_oracle(eom: &EomMatrix, t_max: f64, n_samples: usize) -> Result<OracleReport> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::arg("t_max must be positive and finite"));
    }
    if n_samples < 10 {
        return Err(Error::arg("n_samples must be at least 10"));
    }
    let a = eom.a();
    let a_norm = a.norm_2();
    let t_min = t_max * 1e-4;
    let ratio = (t_max / t_min).ln();
    let mut ts = Vec::with_capacity(n_samples);
    let mut logs = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let t = t_min * (ratio * k as f64 / (n_samples - 1) as f64).exp();
        let norm = match expm(&a.scale(t)) {
            Ok(e) => e.norm_2(),
            Err(_) => f64::INFINITY,
        };
        if !norm.is_finite() {
            return Ok(OracleReport { verdict: Boundedness::Diverging, rate: f64::INFINITY, final_norm: f64::INFINITY });
        }
        ts.push(t);
        logs.push(norm.ln());
    }
    let n = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let ml = logs.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, l) in ts.iter().zip(&logs) {
        sxy += (t - mt) * (l - ml);
        sxx += (t - mt) * (t - mt);
    }
    let rate = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let final_norm = logs.last().map(|l| l.exp()).unwrap_or(1.0);
    let diverging = rate > 1e-6 * a_norm || final_norm > 1e3;
    Ok(OracleReport {
        verdict: if diverging { Boundedness::Diverging } else { Boundedness::Bounded },
        rate,
        final_norm,
    })
}

/// Result of rotating a single-mode Hamiltonian into `α′P² + β′X²` form.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleModeForm {
    pub alpha_prime: f64,
    pub beta_prime: f64,
    pub theta: f64,
    pub s: SymplecticMatrix,
    pub kind: ModeKind,
}

/// Single mode with `V = [[β₁, γ₁], [γ₁, α₁]]`: the rotation
/// `S = [[sin θ, cos θ], [−cos θ, sin θ]]` brings V to `diag(β′, α′)`.
pub fn single_mode_geometric_form(model: &QuadraticModel) -> Result<SingleModeForm> {
    if model.n_modes() != 1 {
        return Err(Error::arg("single-mode form needs exactly one mode"));
    }
    let v = model.v();
    let (beta, gamma, alpha) = (v[(0, 0)], v[(0, 1)], v[(1, 1)]);
    let root = ((alpha - beta) * (alpha - beta) + 4.0 * gamma * gamma).sqrt();
    let alpha_prime = 0.5 * ((alpha + beta) + root);
    let beta_prime = 0.5 * ((alpha + beta) - root);
    // tan 2θ = 2γ/(α−β), on the branch that puts β′ first
    let y = -2.0 * gamma;
    let theta = if y == 0.0 && alpha == beta { 0.0 } else { 0.5 * (y + 0.0).atan2(beta - alpha) };
    let (s, c) = (theta.sin(), theta.cos());
    let sm = SymplecticMatrix::new(Matrix::from_rows(&[[s, c], [-c, s]]))?;
    let det = alpha * beta - gamma * gamma;
    let det_tol = 1e-10 * v.norm_fro().max(1.0).powi(2);
    let kind = if det.abs() <= det_tol {
        ModeKind::Lineal
    } else if det < 0.0 {
        ModeKind::Hyperbolic
    } else {
        ModeKind::Circular
    };
    let form = SingleModeForm { alpha_prime, beta_prime, theta, s: sm, kind };
    let w = congruence_transform(model, &form.s)?;
    let resid = (w.v() - &Matrix::from_diag(&[beta_prime, alpha_prime])).norm_fro();
    if resid > 1e-8 * v.norm_fro().max(1.0) {
        return Err(Error::Internal(format!("single-mode rotation residual {resid:e}")));
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::eom_matrix;

    fn model(n: usize, rows: &[&[f64]]) -> QuadraticModel {
        QuadraticModel::new(n, Matrix::from_rows(rows)).unwrap()
    }

    #[test]
    fn oscillator_is_stable_circular() {
        let m = model(1, &[&[1.0, 0.0], &[0.0, 1.0]]);
        let v = is_dynamically_stable(&eom_matrix(&m).unwrap()).unwrap();
        assert!(v.stable);
        assert_eq!(v.mode_kinds, vec![ModeKind::Circular]);
    }

    #[test]
    fn inverted_oscillator_is_hyperbolic() {
        // α = β = 1: H = p² − x²
        let m = model(1, &[&[-2.0, 0.0], &[0.0, 2.0]]);
        let e = eom_matrix(&m).unwrap();
        let classes = classify_spectrum(&e).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].kind, EigenKind::RealPair);
        assert!((classes[0].value.re - 2.0).abs() < 1e-12);
        let v = is_dynamically_stable(&e).unwrap();
        assert!(!v.stable);
        assert_eq!(v.mode_kinds, vec![ModeKind::Hyperbolic]);
    }

    #[test]
    fn free_particle_is_lineal() {
        let m = model(1, &[&[0.0, 0.0], &[0.0, 1.0]]);
        let v = is_dynamically_stable(&eom_matrix(&m).unwrap()).unwrap();
        assert!(!v.stable);
        assert_eq!(v.mode_kinds, vec![ModeKind::Lineal]);
        assert_eq!(v.classes[0].kind, EigenKind::Zero);
        assert_eq!((v.classes[0].algebraic_multiplicity, v.classes[0].geometric_multiplicity), (2, 1));
    }

    #[test]
    fn null_hamiltonian_is_zero_mode() {
        let m = model(1, &[&[0.0, 0.0], &[0.0, 0.0]]);
        let v = is_dynamically_stable(&eom_matrix(&m).unwrap()).unwrap();
        assert_eq!(v.mode_kinds, vec![ModeKind::ZeroMode]);
        assert!(!v.stable);
    }

    #[test]
    fn degenerate_oscillators_are_semisimple() {
        let m = QuadraticModel::new(2, Matrix::identity(4)).unwrap();
        let v = is_dynamically_stable(&eom_matrix(&m).unwrap()).unwrap();
        assert!(v.stable);
        assert_eq!(v.classes.len(), 1);
        assert_eq!(v.classes[0].algebraic_multiplicity, 4);
        assert_eq!(v.classes[0].geometric_multiplicity, 4);
    }

    #[test]
    fn radius_grows_with_block_size() {
        let r: Vec<f64> = (2..=6).map(|k| cluster_radius(1.0, k)).collect();
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        assert!((r[0] - 1e-13f64.sqrt()).abs() < 1e-20);
    }

    #[test]
    fn oracle_on_basic_models() {
        let osc = eom_matrix(&model(1, &[&[1.0, 0.0], &[0.0, 1.0]])).unwrap();
        let r = boundedness_oracle(&osc, 1e4, 40).unwrap();
        assert_eq!(r.verdict, Boundedness::Bounded);
        assert!(r.rate.abs() < 1e-8);

        let inv = eom_matrix(&model(1, &[&[-2.0, 0.0], &[0.0, 2.0]])).unwrap();
        let r = boundedness_oracle(&inv, 10.0, 40).unwrap();
        assert_eq!(r.verdict, Boundedness::Diverging);
        assert!((r.rate - 2.0).abs() < 0.05, "rate {}", r.rate);

        let free = eom_matrix(&model(1, &[&[0.0, 0.0], &[0.0, 1.0]])).unwrap();
        let r = boundedness_oracle(&free, 1e5, 40).unwrap();
        assert_eq!(r.verdict, Boundedness::Diverging);
        assert!(r.rate < 1e-3);

        let huge = eom_matrix(&model(1, &[&[-2.0, 0.0], &[0.0, 2.0]])).unwrap();
        let r = boundedness_oracle(&huge, 1e4, 20).unwrap();
        assert_eq!(r.rate, f64::INFINITY);
    }

    #[test]
    fn single_mode_examples() {
        let f = single_mode_geometric_form(&model(1, &[&[1.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert_eq!((f.alpha_prime, f.beta_prime, f.theta, f.kind), (1.0, 1.0, 0.0, ModeKind::Circular));

        let f = single_mode_geometric_form(&model(1, &[&[-1.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert_eq!((f.alpha_prime, f.beta_prime, f.kind), (1.0, -1.0, ModeKind::Hyperbolic));

        // α₁ = 2, β₁ = 0.5, γ₁ = 1 sits on the boundary
        let f = single_mode_geometric_form(&model(1, &[&[0.5, 1.0], &[1.0, 2.0]])).unwrap();
        assert!((f.alpha_prime - 2.5).abs() < 1e-14 && f.beta_prime.abs() < 1e-14);
        assert_eq!(f.kind, ModeKind::Lineal);
    }
}
