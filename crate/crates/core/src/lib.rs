//! Dynamical stability of time-independent quadratic bosonic Hamiltonians.
//!
//! A Hamiltonian `H = ½ ξᵀ V ξ` with `ξ = (x₁…x_N, p₁…p_N)` evolves under
//! `dξ/dt = J V ξ`. The system is stable exactly when `A = JV` is
//! diagonalizable with a purely imaginary spectrum; equivalently, no mode of
//! its geometric (symplectically decoupled) Hamiltonian is hyperbolic or
//! lineal. On top of the generic machinery sit the two- and three-mode
//! linearized optomechanical models and Gaussian moment propagation.
//!
//! Frequencies are unit-agnostic; the optomechanical helpers use the
//! mechanical frequency Ω as the natural reference.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod eig;
pub mod error;
pub mod expm;
mod intertwine;
pub mod matrix;
pub mod normal_forms;
pub mod optomech2;
pub mod optomech3;
pub mod quadform;
pub mod spectral;
pub mod svd;

pub use error::Error;
pub use matrix::Matrix;
pub use num_complex::Complex64;
pub use quadform::{EomMatrix, QuadraticModel, SymplecticMatrix};
pub use spectral::{ModeKind, StabilityVerdict};

pub type Result<T> = core::result::Result<T, Error>;
