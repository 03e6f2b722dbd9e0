use serde::{Serialize, Serializer};

use crate::funcspace::Verdict;

/// Relative tolerance for the sign and equality flags.
pub const SIGN_TOL: f64 = 1e-7;

/// `max(1, Var)`, the scale every tolerance is measured against.
pub fn tolerance_scale(variance: f64) -> f64 {
    variance.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `Var g(X) <= S`.
    Upper,
    /// `Var g(X) >= S`.
    Lower,
}

impl Direction {
    /// Multiplier turning `Var - S` into the non-negative residual.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Upper => -1.0,
            Direction::Lower => 1.0,
        }
    }

    /// The value a divergent bound degenerates to.
    pub fn trivial(self) -> BoundValue {
        match self {
            Direction::Upper => BoundValue::PosInf,
            Direction::Lower => BoundValue::NegInf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundValue {
    Finite(f64),
    PosInf,
    NegInf,
}

impl BoundValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            BoundValue::Finite(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            BoundValue::Finite(v) => *v,
            BoundValue::PosInf => f64::INFINITY,
            BoundValue::NegInf => f64::NEG_INFINITY,
        }
    }
}

impl std::fmt::Display for BoundValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundValue::Finite(v) => write!(f, "{v}"),
            BoundValue::PosInf => f.write_str("+inf"),
            BoundValue::NegInf => f.write_str("-inf"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BoundValue::Finite(v) => s.serialize_f64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Upper bound on the residual from a single derivative moment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualCap {
    pub tau: usize,
    /// `u_{m,n,tau}`.
    pub factor: f64,
    /// `E q^tau (g^(tau))^2`.
    pub moment: f64,
    pub cap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: &'static str,
    pub m: usize,
    pub n: usize,
    pub direction: Direction,
    pub bound: BoundValue,
    /// `None` when `E g^2` itself diverges.
    pub variance: Option<f64>,
    /// Signed so that the theorem asserts `residual >= 0`.
    pub residual: Option<f64>,
    pub sign_ok: bool,
    pub equality: bool,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub lambda: Vec<f64>,
    pub membership: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<ResidualCap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl BoundReport {
    pub fn is_trivial(&self) -> bool {
        self.bound.finite().is_none()
    }

    /// `|Var - S|`, when both are finite.
    pub fn gap(&self) -> Option<f64> {
        Some((self.variance? - self.bound.finite()?).abs())
    }

    pub fn scale(&self) -> f64 {
        tolerance_scale(self.variance.unwrap_or(1.0))
    }
}
