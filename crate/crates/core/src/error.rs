use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::matrix::Matrix;

#[derive(Debug, Clone)]
pub enum Error {
    InvalidArgument(String),
    /// Coefficient matrix is not symmetric (or has the wrong shape).
    InvalidModel { reason: String, residual: f64 },
    InvalidSpec(String),
    /// Eigensolver or factorization failure; carries the offending matrix.
    NumericFailure { what: String, matrix: Option<Box<Matrix>> },
    Overflow,
    /// Propagation overflowed; the last time at which the state was finite.
    Diverged { last_finite_time: f64 },
    DegenerateDetuning,
    /// A closed-form construction failed validation and no fallback worked.
    FormulaDiscrepancy { what: String, symplectic_residual: f64, form_residual: f64 },
    Internal(String),
}

impl Error {
    pub(crate) fn numeric(what: &str, matrix: Option<Matrix>) -> Self {
        Error::NumericFailure { what: what.into(), matrix: matrix.map(Box::new) }
    }

    pub(crate) fn arg(what: &str) -> Self {
        Error::InvalidArgument(what.into())
    }

    /// True for errors caused by the caller's input rather than by numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::InvalidModel { .. } | Error::InvalidSpec(_) | Error::DegenerateDetuning
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(s) => write!(f, "invalid argument: {s}"),
            Error::InvalidModel { reason, residual } => write!(f, "invalid model: {reason} (residual {residual:e})"),
            Error::InvalidSpec(s) => write!(f, "invalid normal-form spec: {s}"),
            Error::NumericFailure { what, matrix } => {
                write!(f, "numeric failure: {what}")?;
                if let Some(m) = matrix {
                    write!(f, "\n{m:?}")?;
                }
                Ok(())
            }
            Error::Overflow => write!(f, "matrix exponential overflow"),
            Error::Diverged { last_finite_time } => write!(f, "state diverged after t = {last_finite_time}"),
            Error::DegenerateDetuning => write!(f, "degenerate detuning |Δ| ≈ Ω, effective frequencies diverge"),
            Error::FormulaDiscrepancy { what, symplectic_residual, form_residual } => write!(
                f,
                "formula discrepancy in {what}: symplectic residual {symplectic_residual:e}, form residual {form_residual:e}"
            ),
            Error::Internal(s) => write!(f, "internal error: {s}"),
        }
    }
}

impl core::error::Error for Error {}
