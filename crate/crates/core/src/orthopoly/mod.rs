//! Orthonormal polynomial systems and Gauss rules for in-scope laws.

mod poly;
mod quadrature;
mod recurrence;

use thiserror::Error;

pub use poly::Polynomial;
pub use quadrature::{gauss_rule, gauss_rule_from_table, tridiagonal_eigenvalues, QuadratureRule};
pub use recurrence::{nu_coefficient, recurrence, rodrigues_leading, rodrigues_norm, RecurrenceTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrthoError {
    #[error("recurrence lost positivity at degree {degree} (b = {value})")]
    NumericalBreakdown { degree: usize, value: f64 },
    #[error("degree {requested} exceeds the table cap {cap}")]
    DegreeExceeded { requested: usize, cap: usize },
    #[error("eigenvalue solver failed: {0}")]
    EigenFailure(String),
    #[error("a rule needs at least one node")]
    EmptyRule,
}
