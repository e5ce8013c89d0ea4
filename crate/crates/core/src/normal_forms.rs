//! Jordan-type normal-form Hamiltonians (types I–VI) and their split into a
//! geometric part `H_G` of independent modes plus a commuting interaction
//! `H_I`.
//!
//! Each split comes with the symplectic matrix `S` realizing it, so that
//! `S⁻ᵀ V S⁻¹ = W_G + W_I` with `W_G J W_I = W_I J W_G`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::f64::consts::FRAC_PI_4;
use core::fmt;
use core::str::FromStr;
use num_complex::Complex64;

use crate::error::Error;
use crate::expm::expm;
use crate::matrix::Matrix;
use crate::quadform::{
    check_symplectic, congruence_transform, j_matrix, Quad, QuadraticModel, SymplecticMatrix, Terms, TOL_SYMP,
};
use crate::spectral::ModeKind;
use crate::Result;

use Quad::{P, X};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JordanType {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl JordanType {
    pub const ALL: [JordanType; 6] =
        [JordanType::I, JordanType::II, JordanType::III, JordanType::IV, JordanType::V, JordanType::VI];

    pub fn name(self) -> &'static str {
        match self {
            JordanType::I => "I",
            JordanType::II => "II",
            JordanType::III => "III",
            JordanType::IV => "IV",
            JordanType::V => "V",
            JordanType::VI => "VI",
        }
    }

    /// Whether chain length `d` is allowed for this type.
    pub fn accepts_chain(self, d: usize) -> bool {
        d >= 1
            && match self {
                JordanType::I | JordanType::II => true,
                JordanType::III | JordanType::V => d % 2 == 1,
                JordanType::IV | JordanType::VI => d % 2 == 0,
            }
    }

    pub fn uses_sigma(self) -> bool {
        matches!(self, JordanType::III | JordanType::IV | JordanType::VI)
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for JordanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(JordanType::I),
            "II" | "2" => Ok(JordanType::II),
            "III" | "3" => Ok(JordanType::III),
            "IV" | "4" => Ok(JordanType::IV),
            "V" | "5" => Ok(JordanType::V),
            "VI" | "6" => Ok(JordanType::VI),
            _ => Err(Error::InvalidSpec(format!("unknown normal-form type {s:?}"))),
        }
    }
}

/// Parameters of one Jordan-type normal form.
///
/// `lambda` is real (imaginary part zero) for types I, III and IV, complex
/// with both parts positive for type II, and ignored for V and VI. `sigma`
/// is ±1 for III (the sign iσ of the chain), IV and VI.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JordanTypeSpec {
    pub type_id: JordanType,
    pub d: usize,
    pub lambda: Complex64,
    pub sigma: f64,
}

impl JordanTypeSpec {
    pub fn new(type_id: JordanType, d: usize, lambda: Complex64, sigma: f64) -> Result<Self> {
        let spec = JordanTypeSpec { type_id, d, lambda, sigma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.type_id;
        if self.d == 0 {
            return Err(Error::InvalidSpec("chain length must be at least 1".into()));
        }
        if !t.accepts_chain(self.d) {
            let parity = if matches!(t, JordanType::III | JordanType::V) { "odd" } else { "even" };
            return Err(Error::InvalidSpec(format!("type {t} needs {parity} chain length, got {}", self.d)));
        }
        let (lr, li) = (self.lambda.re, self.lambda.im);
        match t {
            JordanType::I | JordanType::III | JordanType::IV => {
                if !(lr > 0.0) || !lr.is_finite() || li != 0.0 {
                    return Err(Error::InvalidSpec(format!("type {t} needs real λ > 0")));
                }
            }
            JordanType::II => {
                if !(lr > 0.0 && li > 0.0) || !lr.is_finite() || !li.is_finite() {
                    return Err(Error::InvalidSpec("type II needs λ with positive real and imaginary parts".into()));
                }
            }
            JordanType::V | JordanType::VI => {}
        }
        if t.uses_sigma() && self.sigma != 1.0 && self.sigma != -1.0 {
            return Err(Error::InvalidSpec(format!("type {t} needs σ = ±1")));
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        match self.type_id {
            JordanType::II => 2 * self.d,
            JordanType::VI => self.d / 2,
            _ => self.d,
        }
    }
}

/// Geometric part, interaction part and the symplectic matrix joining them
/// to the normal form.
#[derive(Clone, Debug)]
pub struct GeometricSplit {
    pub w_g: Matrix,
    pub w_i: Matrix,
    pub s: SymplecticMatrix,
    pub mode_kinds: Vec<ModeKind>,
    pub residuals: SplitResiduals,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitResiduals {
    pub symplectic: f64,
    /// `‖S⁻ᵀVS⁻¹ − W_G − W_I‖_F`.
    pub congruence: f64,
    /// `‖W_G J W_I − W_I J W_G‖_F`.
    pub commutation: f64,
    /// Largest relative mismatch of `tr(Aᵏ)` between the two forms.
    pub spectrum: f64,
}

/// Coefficient matrix of the normal-form Hamiltonian.
pub fn build_normal_form(spec: &JordanTypeSpec) -> Result<QuadraticModel> {
    spec.validate()?;
    Ok(parts(spec).0)
}

fn parts(spec: &JordanTypeSpec) -> (QuadraticModel, Matrix, Matrix) {
    let d = spec.d;
    let s = spec.sigma;
    let l = spec.lambda.re;
    let n = spec.n_modes();
    let mut h = Terms::new(n);
    let mut g = Terms::new(n);
    let mut i = Terms::new(n);
    let sgn = |j: usize| if j % 2 == 1 { 1.0 } else { -1.0 };
    match spec.type_id {
        JordanType::I => {
            for j in 1..=d {
                h.add(X(j), P(j), l);
                g.add(P(j), P(j), l / 2.0).add(X(j), X(j), -l / 2.0);
            }
            for j in 1..d {
                h.add(X(j), P(j + 1), 1.0);
                i.add(X(j), P(j + 1), 0.5).add(P(j), X(j + 1), -0.5);
                i.add(X(j), X(j + 1), -0.5).add(P(j), P(j + 1), 0.5);
            }
        }
        JordanType::II => {
            let li = spec.lambda.im;
            for j in 1..=2 * d {
                h.add(X(j), P(j), l);
                g.add(P(j), P(j), l / 2.0).add(X(j), X(j), -l / 2.0);
            }
            for j in 1..=d {
                for t in [&mut h, &mut i] {
                    t.add(X(2 * j), P(2 * j - 1), li).add(P(2 * j), X(2 * j - 1), -li);
                }
            }
            for j in 1..=2 * d - 2 {
                h.add(X(j), P(j + 2), 1.0);
                i.add(X(j), P(j + 2), 0.5).add(P(j), X(j + 2), -0.5);
                i.add(X(j), X(j + 2), -0.5).add(P(j), P(j + 2), 0.5);
            }
        }
        JordanType::III => {
            for j in 1..=d {
                let c = s * l / 2.0 * sgn(j);
                h.add(X(j), X(d + 1 - j), c).add(P(j), P(d + 1 - j), c);
            }
            for j in 1..d {
                h.add(X(j), P(j + 1), 1.0);
            }
            if d == 1 {
                g = h.clone();
            } else {
                g.add(P(1), P(1), 1.0).add(P(d), P(d), 1.0);
                for j in 2..d {
                    let c = s * l / 2.0 * sgn(j);
                    i.add(X(j), X(d + 1 - j), c).add(P(j), P(d + 1 - j), c);
                    i.add(X(j), P(j + 1), 1.0);
                }
                i.add(P(1), P(2), 1.0).add(P(1), X(d), s * l).add(X(1), P(d), -s * l);
            }
        }
        JordanType::IV => {
            for j in 1..d {
                let c = s / 2.0 * sgn(j);
                h.add(X(j), X(d - j), c).add(P(j + 1), P(d + 1 - j), c);
            }
            for j in 1..=d {
                h.add(X(j), X(d + 1 - j), s * l / 2.0).add(P(j), P(d + 1 - j), s * l / 2.0);
            }
            g.add(P(1), P(1), s / 2.0).add(P(d), P(d), s / 2.0);
            i.add(P(1), X(d), s * l).add(X(1), P(d), -s * l);
            if d > 2 {
                i.add(P(1), X(d - 1), s).add(P(2), P(d), s);
                for j in 2..d - 1 {
                    let c = s / 2.0 * sgn(j);
                    i.add(X(j), X(d - j), c).add(P(j + 1), P(d + 1 - j), c);
                }
                for j in 2..d {
                    i.add(X(j), X(d + 1 - j), s * l / 2.0).add(P(j), P(d + 1 - j), s * l / 2.0);
                }
            }
        }
        JordanType::V => {
            for j in 1..d {
                h.add(X(j), P(j + 1), 1.0);
            }
            if d > 1 {
                g.add(P(1), P(1), 1.0).add(P(d), P(d), 1.0);
                i.add(P(1), P(2), 1.0);
                for j in 2..d {
                    i.add(X(j), P(j + 1), 1.0);
                }
            }
        }
        JordanType::VI => {
            let m = n;
            for j in 1..m {
                h.add(X(j), P(j + 1), s);
            }
            h.add(X(m), X(m), s / 2.0 * sgn(m));
            if d == 2 {
                g.add(P(1), P(1), s / 2.0);
            } else {
                g.add(P(1), P(1), s);
                i.add(P(1), P(2), s);
                for j in 2..m {
                    i.add(X(j), P(j + 1), s);
                }
                i.add(X(m), X(m), s / 2.0 * sgn(m));
            }
        }
    }
    (h.build(), g.into_matrix(), i.into_matrix())
}

/// `exp(tJQ)`: the phase-space map generated by the quadratic form
/// `½ξᵀQξ` over time t.
pub fn unitary_generator_to_symplectic(q: &Matrix, t: f64) -> Result<SymplecticMatrix> {
    if !q.is_square() || q.rows() % 2 != 0 || q.rows() == 0 {
        return Err(Error::arg("generator must be square with even dimension"));
    }
    if q.asymmetry() > crate::quadform::tol_sym(q) {
        return Err(Error::arg("generator must be symmetric"));
    }
    let j = j_matrix(q.rows() / 2);
    let e = expm(&(&j * q).scale(t))?;
    SymplecticMatrix::new(e)
}

// quarter-period oscillator rotation on the listed modes
fn oscillator(n: usize, modes: &[usize]) -> Matrix {
    let mut t = Terms::new(n);
    for &k in modes {
        t.add(X(k), X(k), 0.5).add(P(k), P(k), 0.5);
    }
    t.into_matrix()
}

// phase-space action of exp(−i t Ĥ_Q) on the quadratures
fn action(q: &Matrix, t: f64) -> Result<SymplecticMatrix> {
    unitary_generator_to_symplectic(q, -t)
}

fn split_transform(spec: &JordanTypeSpec) -> Result<SymplecticMatrix> {
    let n = spec.n_modes();
    let d = spec.d;
    let all: Vec<usize> = (1..=n).collect();
    let rotate_first = || action(&oscillator(n, &[1]), FRAC_PI_2);
    let composite = |u1: Matrix| -> Result<SymplecticMatrix> { rotate_first()?.compose(&action(&u1, 1.0)?) };
    match spec.type_id {
        JordanType::I | JordanType::II => action(&oscillator(n, &all), FRAC_PI_4),
        JordanType::III | JordanType::V if d == 1 => Ok(SymplecticMatrix::identity(n)),
        JordanType::III | JordanType::V => {
            let mut u = Terms::new(n);
            u.add(X(1), X(2), -1.0).add(P(d - 1), P(d), 1.0);
            composite(u.into_matrix())
        }
        JordanType::IV | JordanType::VI if d == 2 => rotate_first(),
        JordanType::IV => {
            let mut u = Terms::new(n);
            u.add(X(1), P(d - 1), 0.5).add(X(2), P(d), -0.5);
            composite(u.into_matrix())
        }
        JordanType::VI => {
            let mut u = Terms::new(n);
            u.add(X(1), X(2), -1.0);
            composite(u.into_matrix())
        }
    }
}

fn modal_kinds(w_g: &Matrix, n: usize) -> Vec<ModeKind> {
    let tol = 1e-12 * w_g.max_abs().max(1.0);
    (0..n)
        .map(|k| {
            let (b, a) = (w_g[(k, k)], w_g[(n + k, n + k)]);
            let (za, zb) = (a.abs() <= tol, b.abs() <= tol);
            match (za, zb) {
                (true, true) => ModeKind::ZeroMode,
                (true, false) | (false, true) => ModeKind::Lineal,
                _ if a * b > 0.0 => ModeKind::Circular,
                _ => ModeKind::Hyperbolic,
            }
        })
        .collect()
}

/// Largest relative difference in `tr(Aᵏ)`, k = 1…2N, between two
/// Hamiltonian matrices. Equal traces for all k mean equal spectra.
pub(crate) fn power_trace_mismatch(a: &Matrix, b: &Matrix) -> f64 {
    let n = a.rows();
    let scale = a.norm_2().max(b.norm_2()).max(1.0);
    let (an, bn) = (a.scale(1.0 / scale), b.scale(1.0 / scale));
    let (mut pa, mut pb) = (an.clone(), bn.clone());
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        worst = worst.max((pa.trace() - pb.trace()).abs() / n as f64);
        pa = &pa * &an;
        pb = &pb * &bn;
    }
    worst
}

/// Split the normal form into commuting geometric and interaction parts and
/// verify the result.
pub fn geometric_split(spec: &JordanTypeSpec) -> Result<GeometricSplit> {
    spec.validate()?;
    let (model, w_g, w_i) = parts(spec);
    let n = model.n_modes();
    let s = split_transform(spec)?;
    let w = congruence_transform(&model, &s)?;
    let j = j_matrix(n);

    let symplectic = check_symplectic(s.matrix())?.residual;
    let congruence = (&(w.v() - &w_g) - &w_i).norm_fro();
    let commutation = (&(&w_g * &(&j * &w_i)) - &(&w_i * &(&j * &w_g))).norm_fro();
    let spectrum = power_trace_mismatch(&(&j * model.v()), &(&j * &(&w_g + &w_i)));
    let residuals = SplitResiduals { symplectic, congruence, commutation, spectrum };

    let tol_comm = 1e-9 * (1.0 + w_g.norm_fro() * w_i.norm_fro());
    let scale = model.v().norm_fro().max(1.0);
    if symplectic > TOL_SYMP || congruence > 1e-9 * scale || commutation > tol_comm || spectrum > 1e-9 {
        return Err(Error::Internal(format!("type {} split failed verification: {residuals:?}", spec.type_id)));
    }
    let mode_kinds = modal_kinds(&w_g, n);
    Ok(GeometricSplit { w_g, w_i, s, mode_kinds, residuals })
}
