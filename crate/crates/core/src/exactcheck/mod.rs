//! Exact rational verification of the coefficient algebra.

mod identities;
mod matrix;

use thiserror::Error;

pub use identities::{
    build_a, build_b, build_b_i, det_closed_forms, hypergeometric_identity, verify, verify_rho, verify_system,
    CheckRow, Grid,
};
pub use matrix::{bareiss, cramer_solve, gaussian_determinant, ExactMatrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("shape mismatch: {0}")]
    Shape(String),
}
