//! Variance bounds `S_{m,n}(g)`, the legacy bounds they generalize,
//! residual caps and spectral cross-checks.

pub mod coeffs;
mod engine;
mod moments;
mod report;
mod spectrum;
mod strategy;

use thiserror::Error;

use crate::funcspace::{EvalError, MembershipError};
use crate::orthopoly::OrthoError;
use crate::summation::Summation;

pub use engine::{ChernoffCheck, Comparison, Engine, FactorCheck, CHERNOFF_TOL};
pub use moments::DerivativeMoments;
pub use report::{tolerance_scale, BoundReport, BoundValue, Direction, ResidualCap, SIGN_TOL};
pub use spectrum::{fourier_coefficients, spectral_truncation, stein_residual, FourierSpectrum};
pub use strategy::{
    lookup, registry, Bessel, BoundStrategy, ChernoffStrong, ChernoffWeak, LinearForm, Poincare, Universal,
};

/// Default Gauss rule size for expectations.
pub const DEFAULT_QUAD_SIZE: usize = 128;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("g^({order}) is undefined at x = {x}: {source}")]
    Eval { order: usize, x: f64, source: EvalError },
    #[error(transparent)]
    Membership(#[from] MembershipError),
    #[error(transparent)]
    Quadrature(#[from] OrthoError),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("divergent expectation: {0}")]
    Divergent(String),
    #[error("membership failure: {0}")]
    MembershipFailure(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub quad_size: usize,
    pub summation: Summation,
    /// Overrides both [`SIGN_TOL`] and [`CHERNOFF_TOL`] when set.
    pub tolerance: Option<f64>,
}

impl Settings {
    pub fn sign_tol(&self) -> f64 {
        self.tolerance.unwrap_or(SIGN_TOL)
    }

    pub fn chernoff_tol(&self) -> f64 {
        self.tolerance.unwrap_or(CHERNOFF_TOL)
    }
}

impl Default for Settings {
    /// Default rule size; summation mode from the environment.
    fn default() -> Self {
        Settings { quad_size: DEFAULT_QUAD_SIZE, summation: Summation::from_env(), tolerance: None }
    }
}
