//! Gaussian quadrature for in-scope Pearson laws (Golub-Welsch).
//!
//! Nodes are the eigenvalues of the symmetric Jacobi matrix built from the
//! recurrence. Weights use the Christoffel form `1 / sum_k phi_k(x)^2`,
//! which equals the squared first eigenvector component but keeps full
//! relative accuracy for the tiny weights far in the tails.

use std::io::Write;

use crate::pearson::PearsonDistribution;
use crate::summation::Summation;

use super::recurrence::{recurrence, RecurrenceTable};
use super::OrthoError;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    summation: Summation,
}

/// `K`-point Gauss rule for `dist`, exact for polynomials of degree `2K-1`.
pub fn gauss_rule(dist: &PearsonDistribution, size: usize) -> Result<QuadratureRule, OrthoError> {
    let table = recurrence(dist, size)?;
    gauss_rule_from_table(&table, size)
}

pub fn gauss_rule_from_table(table: &RecurrenceTable, size: usize) -> Result<QuadratureRule, OrthoError> {
    if size == 0 {
        return Err(OrthoError::EmptyRule);
    }
    if size > table.degree_cap() {
        return Err(OrthoError::DegreeExceeded { requested: size, cap: table.degree_cap() });
    }
    let mut diag = table.recur_a()[..size].to_vec();
    let mut off: Vec<f64> = (1..size).map(|k| table.recur_b()[k].sqrt()).collect();
    off.push(0.0);
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    diag.sort_by(|a, b| a.total_cmp(b));
    let nodes = diag;
    let raw: Vec<f64> = nodes.iter().map(|&x| christoffel_weight(table, x, size)).collect();
    let total: f64 = Summation::Compensated.sum(raw.iter().copied());
    if !(total > 0.0) || !total.is_finite() {
        return Err(OrthoError::EigenFailure("weights do not sum to a positive mass".into()));
    }
    let weights = raw.into_iter().map(|w| w / total).collect();
    Ok(QuadratureRule { nodes, weights, summation: Summation::default() })
}

/// `1 / sum_{k<size} phi_k(x)^2`, rescaling as the sum grows so that
/// distant nodes underflow to zero instead of overflowing.
fn christoffel_weight(table: &RecurrenceTable, x: f64, size: usize) -> f64 {
    const BIG: f64 = 1e150;
    let a = table.recur_a();
    let b = table.recur_b();
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sum = 1.0;
    let mut rescales = 0i32;
    for k in 0..size - 1 {
        let next = ((x - a[k]) * cur - b[k].sqrt() * prev) / b[k + 1].sqrt();
        prev = cur;
        cur = next;
        sum += cur * cur;
        if cur.abs() > BIG {
            prev /= BIG;
            cur /= BIG;
            sum /= BIG * BIG;
            rescales += 1;
        }
    }
    if rescales > 1 {
        return 0.0;
    }
    let w = 1.0 / sum;
    if rescales == 1 {
        w / (BIG * BIG)
    } else {
        w
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit QL method
/// with Wilkinson shifts. `diag` receives the eigenvalues; `off[i]` couples
/// rows `i` and `i+1` and is destroyed.
pub fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) -> Result<(), OrthoError> {
    let n = diag.len();
    if off.len() != n {
        return Err(OrthoError::EigenFailure("off-diagonal length must equal the dimension".into()));
    }
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(OrthoError::EigenFailure(format!("no convergence for eigenvalue {l}")));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn summation(&self) -> Summation {
        self.summation
    }

    pub fn with_summation(mut self, summation: Summation) -> Self {
        self.summation = summation;
        self
    }

    /// `E h(X)` under the rule.
    pub fn expect<F: Fn(f64) -> f64>(&self, h: F) -> f64 {
        self.summation.sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * h(x)))
    }

    /// Weighted sum of precomputed integrand values at the nodes.
    pub fn expect_values(&self, values: &[f64]) -> f64 {
        self.summation.sum(self.weights.iter().zip(values).map(|(w, v)| w * v))
    }

    /// `node,weight` rows with a header line.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "weight"])?;
        for (x, wt) in self.nodes.iter().zip(&self.weights) {
            w.write_record([format!("{x:e}"), format!("{wt:e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}
