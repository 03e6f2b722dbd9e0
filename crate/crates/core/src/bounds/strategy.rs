//! Bound strategies behind a common trait, registered by name.
//!
//! Every bound handled here has the shape
//! `S = sum_i a_i E^2[q^i g^(i)] + sum_i lambda_i E[q^i (g^(i))^2]`,
//! so a strategy only has to supply its coefficients, the class of
//! functions it needs and the direction of the inequality.

use crate::pearson::PearsonDistribution;

use super::coeffs::{a_coefficient_f64, b_coefficient_f64, factorial, prod_one_minus};
use super::report::Direction;
use super::BoundsError;

/// Coefficient vectors; `a[i-1]` and `lambda[i-1]` belong to order `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    pub a: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl LinearForm {
    pub fn order(&self) -> usize {
        self.a.len().max(self.lambda.len())
    }

    /// Terms in a fixed order: the squared-mean part first, then the
    /// quadratic part, both by increasing derivative order.
    pub fn terms(&self, linear: &[f64], quadratic: &[f64]) -> Vec<f64> {
        let squares = self.a.iter().enumerate().map(|(j, a)| a * linear[j + 1] * linear[j + 1]);
        let quads = self.lambda.iter().enumerate().map(|(j, l)| if *l == 0.0 { 0.0 } else { l * quadratic[j + 1] });
        squares.chain(quads).collect()
    }
}

pub trait BoundStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    /// Rejects parameter combinations the bound is not defined for.
    fn validate(&self, m: usize, n: usize) -> Result<(), BoundsError>;

    /// `(m', n')` such that the bound needs `g` in `H^{m',n'}(X)`.
    fn required_class(&self, m: usize, n: usize) -> (usize, usize);

    fn direction(&self, m: usize, n: usize) -> Direction;

    fn form(&self, dist: &PearsonDistribution, m: usize, n: usize) -> LinearForm;
}

fn parity(n: usize) -> Direction {
    if n % 2 == 1 {
        Direction::Upper
    } else {
        Direction::Lower
    }
}

fn signed(i: usize, v: f64) -> f64 {
    if i % 2 == 1 {
        v
    } else {
        -v
    }
}

fn require_order(n: usize, what: &str) -> Result<(), BoundsError> {
    if n == 0 {
        Err(BoundsError::InvalidOrder(format!("{what} needs n >= 1")))
    } else {
        Ok(())
    }
}

/// `1 / (i! E q^i prod_{j=i-1}^{2i-2} (1 - j delta))`, the Bessel weight.
fn bessel_weight(dist: &PearsonDistribution, i: usize) -> f64 {
    let i_ = i as i64;
    1.0 / (factorial::<f64>(i) * dist.moment_q_power(i) * prod_one_minus(i_ - 1, 2 * i_ - 2, &dist.delta()))
}

/// The two-parameter family `S_{m,n}`.
pub struct Universal;

impl BoundStrategy for Universal {
    fn name(&self) -> &'static str {
        "universal"
    }

    fn summary(&self) -> &'static str {
        "S_{m,n}: order n, point balance m; upper for odd n, lower for even n"
    }

    fn validate(&self, m: usize, n: usize) -> Result<(), BoundsError> {
        if m + n == 0 {
            return Err(BoundsError::InvalidOrder("m + n must be at least 1".into()));
        }
        Ok(())
    }

    fn required_class(&self, m: usize, n: usize) -> (usize, usize) {
        (m, n)
    }

    fn direction(&self, _m: usize, n: usize) -> Direction {
        parity(n)
    }

    fn form(&self, dist: &PearsonDistribution, m: usize, n: usize) -> LinearForm {
        let delta = dist.delta();
        LinearForm {
            a: (1..=m).map(|i| a_coefficient_f64(i, m, n, delta, dist.moment_q_power(i))).collect(),
            lambda: (1..=n).map(|i| signed(i, b_coefficient_f64(i, m, n, delta))).collect(),
        }
    }
}

/// Alternating Poincaré-type bound `S_n`.
pub struct Poincare;

impl BoundStrategy for Poincare {
    fn name(&self) -> &'static str {
        "poincare"
    }

    fn summary(&self) -> &'static str {
        "S_n: alternating sum of E q^k (g^(k))^2; upper for odd n, lower for even n"
    }

    fn validate(&self, _m: usize, n: usize) -> Result<(), BoundsError> {
        require_order(n, "the Poincare bound")
    }

    fn required_class(&self, _m: usize, n: usize) -> (usize, usize) {
        (0, n)
    }

    fn direction(&self, _m: usize, n: usize) -> Direction {
        parity(n)
    }

    fn form(&self, dist: &PearsonDistribution, _m: usize, n: usize) -> LinearForm {
        let delta = dist.delta();
        let lambda = (1..=n)
            .map(|k| signed(k, 1.0 / (factorial::<f64>(k) * prod_one_minus(0, k as i64 - 1, &delta))))
            .collect();
        LinearForm { a: Vec::new(), lambda }
    }
}

/// Bessel-inequality lower bound of order `n`.
pub struct Bessel;

impl BoundStrategy for Bessel {
    fn name(&self) -> &'static str {
        "bessel"
    }

    fn summary(&self) -> &'static str {
        "Bessel lower bound: sum of E^2[q^k g^(k)] / (k! E q^k prod)"
    }

    fn validate(&self, _m: usize, n: usize) -> Result<(), BoundsError> {
        require_order(n, "the Bessel bound")
    }

    fn required_class(&self, _m: usize, n: usize) -> (usize, usize) {
        (n, 0)
    }

    fn direction(&self, _m: usize, _n: usize) -> Direction {
        Direction::Lower
    }

    fn form(&self, dist: &PearsonDistribution, _m: usize, n: usize) -> LinearForm {
        LinearForm { a: (1..=n).map(|k| bessel_weight(dist, k)).collect(), lambda: Vec::new() }
    }
}

/// Strong Chernoff-type upper bound `S_{n,(str)}`.
pub struct ChernoffStrong;

impl BoundStrategy for ChernoffStrong {
    fn name(&self) -> &'static str {
        "chernoff-strong"
    }

    fn summary(&self) -> &'static str {
        "S_{n,(str)}: Bessel terms up to n plus a corrected order-n remainder"
    }

    fn validate(&self, _m: usize, n: usize) -> Result<(), BoundsError> {
        require_order(n, "the strong Chernoff bound")
    }

    fn required_class(&self, _m: usize, n: usize) -> (usize, usize) {
        (n, n)
    }

    fn direction(&self, _m: usize, _n: usize) -> Direction {
        Direction::Upper
    }

    fn form(&self, dist: &PearsonDistribution, _m: usize, n: usize) -> LinearForm {
        let n_ = n as i64;
        let tail = 1.0 / (factorial::<f64>(n + 1) * prod_one_minus(n_, 2 * n_ - 1, &dist.delta()));
        let mut a: Vec<f64> = (1..=n).map(|i| bessel_weight(dist, i)).collect();
        a[n - 1] -= tail / dist.moment_q_power(n);
        let mut lambda = vec![0.0; n];
        lambda[n - 1] = tail;
        LinearForm { a, lambda }
    }
}

/// Weak Chernoff-type upper bound `S_{n,(weak)}`.
pub struct ChernoffWeak;

impl BoundStrategy for ChernoffWeak {
    fn name(&self) -> &'static str {
        "chernoff-weak"
    }

    fn summary(&self) -> &'static str {
        "S_{n,(weak)}: Bessel terms up to n-1 plus E q^n (g^(n))^2 / (n! prod)"
    }

    fn validate(&self, _m: usize, n: usize) -> Result<(), BoundsError> {
        require_order(n, "the weak Chernoff bound")
    }

    fn required_class(&self, _m: usize, n: usize) -> (usize, usize) {
        (n, n)
    }

    fn direction(&self, _m: usize, _n: usize) -> Direction {
        Direction::Upper
    }

    fn form(&self, dist: &PearsonDistribution, _m: usize, n: usize) -> LinearForm {
        let n_ = n as i64;
        let mut lambda = vec![0.0; n];
        lambda[n - 1] = 1.0 / (factorial::<f64>(n) * prod_one_minus(n_ - 1, 2 * n_ - 2, &dist.delta()));
        LinearForm { a: (1..n).map(|i| bessel_weight(dist, i)).collect(), lambda }
    }
}

static REGISTRY: [&dyn BoundStrategy; 5] = [&Universal, &Poincare, &Bessel, &ChernoffStrong, &ChernoffWeak];

/// All registered strategies, the default first.
pub fn registry() -> &'static [&'static dyn BoundStrategy] {
    &REGISTRY
}

pub fn lookup(name: &str) -> Option<&'static dyn BoundStrategy> {
    REGISTRY.iter().copied().find(|s| s.name() == name)
}
