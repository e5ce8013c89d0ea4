//! Quadratic models `H = ½ ξᵀ V ξ`, the symplectic form and symplectic
//! congruences.
//!
//! Ordering is fixed to `ξ = (x₁…x_N, p₁…p_N)` with ħ = 1, so `[x_j, p_k] = iδ_jk`
//! and `J = [[0, I], [−I, 0]]`.

use alloc::format;

use crate::error::Error;
use crate::matrix::Matrix;
use crate::Result;

/// Default tolerance on `‖SᵀJS − J‖_F`.
pub const TOL_SYMP: f64 = 1e-8;

/// The only supported quadrature ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureOrdering {
    XsThenPs,
}

/// Tolerance for symmetry of V and the Hamiltonian structure of A.
pub fn tol_sym(v: &Matrix) -> f64 {
    1e-10 * v.norm_fro().max(1.0)
}

/// `J` for `n_modes` modes.
pub fn build_symplectic_form(n_modes: usize) -> Result<Matrix> {
    if n_modes == 0 {
        return Err(Error::arg("n_modes must be at least 1"));
    }
    Ok(j_matrix(n_modes))
}

pub(crate) fn j_matrix(n: usize) -> Matrix {
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// One canonical coordinate, 1-based mode index as in the physics notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quad {
    X(usize),
    P(usize),
}

impl Quad {
    pub fn index(self, n_modes: usize) -> usize {
        match self {
            Quad::X(j) => {
                assert!(j >= 1 && j <= n_modes, "mode index out of range");
                j - 1
            }
            Quad::P(j) => {
                assert!(j >= 1 && j <= n_modes, "mode index out of range");
                n_modes + j - 1
            }
        }
    }
}

/// Accumulates Hamiltonian terms `c·q_a q_b` into a symmetric V.
///
/// Mixed products such as `x p` are taken symmetrized, `½(xp + px)`.
#[derive(Clone, Debug)]
pub struct Terms {
    n: usize,
    v: Matrix,
}

impl Terms {
    pub fn new(n_modes: usize) -> Self {
        Terms { n: n_modes, v: Matrix::zeros(2 * n_modes, 2 * n_modes) }
    }

    pub fn add(&mut self, a: Quad, b: Quad, c: f64) -> &mut Self {
        let (i, k) = (a.index(self.n), b.index(self.n));
        if i == k {
            self.v[(i, i)] += 2.0 * c;
        } else {
            self.v[(i, k)] += c;
            self.v[(k, i)] += c;
        }
        self
    }

    pub fn matrix(&self) -> &Matrix {
        &self.v
    }

    pub fn into_matrix(self) -> Matrix {
        self.v
    }

    pub fn build(self) -> QuadraticModel {
        QuadraticModel { n_modes: self.n, v: self.v }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticModel {
    n_modes: usize,
    v: Matrix,
}

impl QuadraticModel {
    /// Validates shape and symmetry; the stored V is exactly symmetrized.
    pub fn new(n_modes: usize, v: Matrix) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::arg("n_modes must be at least 1"));
        }
        if v.rows() != 2 * n_modes || v.cols() != 2 * n_modes {
            return Err(Error::InvalidModel {
                reason: format!("V is {}x{}, expected {}x{}", v.rows(), v.cols(), 2 * n_modes, 2 * n_modes),
                residual: f64::NAN,
            });
        }
        if !v.is_finite() {
            return Err(Error::InvalidModel { reason: "non-finite entries".into(), residual: f64::NAN });
        }
        let asym = v.asymmetry();
        if asym > tol_sym(&v) {
            return Err(Error::InvalidModel { reason: "V is not symmetric".into(), residual: asym });
        }
        Ok(QuadraticModel { n_modes, v: v.symmetrized() })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn ordering(&self) -> QuadratureOrdering {
        QuadratureOrdering::XsThenPs
    }

    pub fn eom(&self) -> Result<EomMatrix> {
        eom_matrix(self)
    }
}

/// `A = JV` together with the model it came from.
#[derive(Clone, Debug)]
pub struct EomMatrix {
    a: Matrix,
    model: QuadraticModel,
}

impl EomMatrix {
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn model(&self) -> &QuadraticModel {
        &self.model
    }

    pub fn n_modes(&self) -> usize {
        self.model.n_modes
    }

    /// `‖JA + AᵀJ‖_F`.
    pub fn hamiltonian_residual(&self) -> f64 {
        let j = j_matrix(self.model.n_modes);
        (&(&j * &self.a) + &(&self.a.transpose() * &j)).norm_fro()
    }
}

pub fn eom_matrix(model: &QuadraticModel) -> Result<EomMatrix> {
    let asym = model.v.asymmetry();
    if asym > tol_sym(&model.v) {
        return Err(Error::InvalidModel { reason: "V is not symmetric".into(), residual: asym });
    }
    let j = j_matrix(model.n_modes);
    let eom = EomMatrix { a: &j * &model.v, model: model.clone() };
    let res = eom.hamiltonian_residual();
    if res > tol_sym(&model.v) * eom.a.norm_fro().max(1.0) {
        return Err(Error::Internal(format!("JA + AᵀJ residual {res:e}")));
    }
    Ok(eom)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticCheck {
    pub residual: f64,
    pub pass: bool,
}

/// `‖SᵀJS − J‖_F` against [`TOL_SYMP`].
pub fn check_symplectic(s: &Matrix) -> Result<SymplecticCheck> {
    check_symplectic_tol(s, TOL_SYMP)
}

pub fn check_symplectic_tol(s: &Matrix, tol: f64) -> Result<SymplecticCheck> {
    if !s.is_square() || s.rows() % 2 != 0 || s.rows() == 0 {
        return Err(Error::arg("symplectic check needs a square matrix of even dimension"));
    }
    let j = j_matrix(s.rows() / 2);
    let residual = (&(&s.transpose() * &(&j * s)) - &j).norm_fro();
    let residual = if residual.is_finite() { residual } else { f64::INFINITY };
    Ok(SymplecticCheck { residual, pass: residual <= tol })
}

/// A matrix that passed the symplectic check.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    s: Matrix,
}

impl SymplecticMatrix {
    pub fn new(s: Matrix) -> Result<Self> {
        Self::with_tol(s, TOL_SYMP)
    }

    pub fn with_tol(s: Matrix, tol: f64) -> Result<Self> {
        let chk = check_symplectic_tol(&s, tol)?;
        if !chk.pass {
            return Err(Error::InvalidArgument(format!("matrix is not symplectic, residual {:e}", chk.residual)));
        }
        Ok(SymplecticMatrix { s })
    }

    pub fn identity(n_modes: usize) -> Self {
        SymplecticMatrix { s: Matrix::identity(2 * n_modes) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.s
    }

    pub fn into_matrix(self) -> Matrix {
        self.s
    }

    pub fn n_modes(&self) -> usize {
        self.s.rows() / 2
    }

    pub fn inverse(&self) -> Matrix {
        // exact-structure inverse −J Sᵀ J, refined by LU when available
        self.s.inverse().unwrap_or_else(|| {
            let j = j_matrix(self.n_modes());
            -&(&j * &(&self.s.transpose() * &j))
        })
    }

    /// Composition `self · other`, rechecked.
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        SymplecticMatrix::new(&self.s * &other.s)
    }

    pub fn residual(&self) -> f64 {
        check_symplectic_tol(&self.s, f64::INFINITY).map(|c| c.residual).unwrap_or(f64::INFINITY)
    }
}

/// `W = S⁻ᵀ V S⁻¹`, the coefficient matrix in the new variables `Ξ = Sξ`.
pub fn congruence_transform(model: &QuadraticModel, s: &SymplecticMatrix) -> Result<QuadraticModel> {
    if s.matrix().rows() != model.v.rows() {
        return Err(Error::arg("dimension mismatch between model and symplectic matrix"));
    }
    let si = s.inverse();
    let w = &si.transpose() * &(&model.v * &si);
    Ok(QuadraticModel { n_modes: model.n_modes, v: w.symmetrized() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::eigenvalues;
    use alloc::vec::Vec;
    use num_complex::Complex64;

    #[test]
    fn j_basics() {
        assert_eq!(build_symplectic_form(1).unwrap(), Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]));
        assert!(build_symplectic_form(0).is_err());
        for n in 1..5 {
            let j = build_symplectic_form(n).unwrap();
            assert_eq!(&j * &j, Matrix::identity(2 * n).scale(-1.0));
            assert_eq!(j.transpose(), j.scale(-1.0));
        }
    }

    #[test]
    fn inverted_oscillator_eom() {
        // H = αp² − βx², V = diag(−2β, 2α)
        let (alpha, beta) = (1.5, 0.6);
        let m = QuadraticModel::new(1, Matrix::from_diag(&[-2.0 * beta, 2.0 * alpha])).unwrap();
        let a = eom_matrix(&m).unwrap();
        assert_eq!(a.a(), &Matrix::from_rows(&[[0.0, 2.0 * alpha], [2.0 * beta, 0.0]]));
        let mut ev: Vec<f64> = eigenvalues(a.a()).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let rate = 2.0 * (alpha * beta).sqrt();
        assert!((ev[1] - rate).abs() < 1e-14 && (ev[0] + rate).abs() < 1e-14);
    }

    #[test]
    fn oscillator_eom() {
        let m = QuadraticModel::new(1, Matrix::identity(2)).unwrap();
        let a = eom_matrix(&m).unwrap();
        assert_eq!(a.a(), &Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]));
        let ev = eigenvalues(a.a()).unwrap();
        assert!(ev.iter().all(|z| (z.norm() - 1.0).abs() < 1e-14 && z.re.abs() < 1e-14));
        let _ = Complex64::new(0.0, 0.0);
    }

    #[test]
    fn asymmetric_model_rejected() {
        let v = Matrix::from_rows(&[[1.0, 0.5], [0.0, 1.0]]);
        assert!(matches!(QuadraticModel::new(1, v), Err(Error::InvalidModel { .. })));
    }

    #[test]
    fn symplectic_checks() {
        assert_eq!(check_symplectic(&Matrix::identity(4)).unwrap().residual, 0.0);
        for k in 0..12 {
            let t = 0.37 * k as f64;
            let r = Matrix::from_rows(&[[t.sin(), t.cos()], [-t.cos(), t.sin()]]);
            assert!(check_symplectic(&r).unwrap().pass);
        }
        let mut s = Matrix::identity(4);
        for j in 0..4 {
            s[(2, j)] = 0.0;
        }
        assert!(!check_symplectic(&s).unwrap().pass);
        assert!(check_symplectic(&Matrix::identity(3)).is_err());
    }

    #[test]
    fn terms_symmetrize() {
        let mut t = Terms::new(2);
        t.add(Quad::X(1), Quad::P(2), 1.0).add(Quad::P(1), Quad::P(1), 0.5);
        let v = t.matrix();
        assert_eq!(v[(0, 3)], 1.0);
        assert_eq!(v[(3, 0)], 1.0);
        assert_eq!(v[(2, 2)], 1.0);
    }
}
