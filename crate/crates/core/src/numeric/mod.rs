//! Exact integer and rational linear algebra.
//!
//! Everything here is generic over an exact integer scalar (see [`Scalar`]);
//! the crate root fixes the arbitrary-precision instantiation as
//! [`IntMatrix`](crate::IntMatrix) and [`Rational`](crate::Rational).

mod binary_form;
mod linsolve;
mod matrix;
mod scalar;
mod smith;

pub use binary_form::{reduce_binary_form, BinaryFormReduction};
pub use linsolve::{determinant, is_negative_definite, signature, solve_rational};
pub use matrix::Matrix;
pub use scalar::Scalar;
pub use smith::{smith_decomposition, smith_normal_form, SmithDecomposition, SmithForm};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("rows have inconsistent lengths")]
    RaggedRows,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form is not negative definite")]
    NotNegativeDefinite,
}

impl NumericError {
    /// Stable variant name, used for CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            NumericError::RaggedRows => "RaggedRows",
            NumericError::DimensionMismatch { .. } => "DimensionMismatch",
            NumericError::SingularMatrix => "SingularMatrix",
            NumericError::NotSymmetric => "NotSymmetric",
            NumericError::NotNegativeDefinite => "NotNegativeDefinite",
        }
    }
}
