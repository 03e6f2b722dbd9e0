//! Three-term recurrence of the orthonormal system `{phi_k}`.
//!
//! The Rodrigues polynomials `P_k = (-1)^k f^{-1} (q^k f)^{(k)}` solve
//! `q y'' + (mu - x) y' + k(1 - (k-1) delta) y = 0`. Matching the two top
//! coefficients of the monic solution gives the recurrence directly from
//! `(mu, q)`, with `mu_k = (mu + k beta)/(1 - 2k delta)` the mean of the
//! derived law `X_k`:
//!
//! * `a_k = (k+1) mu_k - k mu_{k-1}`
//! * `b_k = k q(mu_{k-1}) (1 - (k-2) delta) / [(1 - (2k-1) delta)(1 - (2k-3) delta)]`
//!
//! so no moment matrix is ever formed.

use crate::bounds::coeffs;
use crate::pearson::PearsonDistribution;

use super::poly::Polynomial;
use super::OrthoError;

/// Recurrence `p_{k+1} = (x - a_k) p_k - b_k p_{k-1}` for the monic
/// polynomials, plus the Rodrigues norms `h_k = E P_k^2(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    degree_cap: usize,
    recur_a: Vec<f64>,
    recur_b: Vec<f64>,
    norms: Vec<f64>,
}

/// Mean of the derived law with density proportional to `q^k f`.
fn derived_mean(mu: f64, beta: f64, delta: f64, k: f64) -> f64 {
    (mu + k * beta) / (1.0 - 2.0 * k * delta)
}

pub fn recurrence(dist: &PearsonDistribution, degree_cap: usize) -> Result<RecurrenceTable, OrthoError> {
    if degree_cap == 0 {
        return Err(OrthoError::EmptyRule);
    }
    let q = dist.quadratic();
    let (mu, delta) = (dist.mean(), q.delta);
    let mut recur_a = Vec::with_capacity(degree_cap + 1);
    let mut recur_b = Vec::with_capacity(degree_cap + 1);
    recur_b.push(1.0);
    for k in 0..=degree_cap {
        let kf = k as f64;
        let mk = derived_mean(mu, q.beta, delta, kf);
        let a = if k == 0 { mu } else { (kf + 1.0) * mk - kf * derived_mean(mu, q.beta, delta, kf - 1.0) };
        recur_a.push(a);
        if k >= 1 {
            let prev = derived_mean(mu, q.beta, delta, kf - 1.0);
            // At k = 1 the factor 1 + delta cancels; it vanishes for delta = -1.
            let b = if k == 1 {
                q.eval(prev) / (1.0 - delta)
            } else {
                kf * q.eval(prev) * (1.0 - (kf - 2.0) * delta)
                    / ((1.0 - (2.0 * kf - 1.0) * delta) * (1.0 - (2.0 * kf - 3.0) * delta))
            };
            if !(b > 0.0) || !b.is_finite() || !a.is_finite() {
                return Err(OrthoError::NumericalBreakdown { degree: k, value: b });
            }
            recur_b.push(b);
        }
    }
    let norms = (0..=degree_cap).map(|k| rodrigues_norm(dist, k)).collect();
    Ok(RecurrenceTable { degree_cap, recur_a, recur_b, norms })
}

/// `h_k = k! E q^k(X) prod_{j=k-1}^{2k-2} (1 - j delta)`.
pub fn rodrigues_norm(dist: &PearsonDistribution, k: usize) -> f64 {
    coeffs::rodrigues_factor(k, &dist.delta()) * dist.moment_q_power(k)
}

/// Leading coefficient of the Rodrigues polynomial `P_k`:
/// `prod_{j=k-1}^{2k-2} (1 - j delta)`.
pub fn rodrigues_leading(delta: f64, k: usize) -> f64 {
    let k = k as i64;
    coeffs::prod_one_minus(k - 1, 2 * k - 2, &delta)
}

/// `nu_k^(i)` with `phi_{k+i}^{(i)} = nu_k^(i) phi_{k,i}`, where `phi_{k,i}`
/// is orthonormal for the derived law `X_i`.
pub fn nu_coefficient(dist: &PearsonDistribution, k: usize, i: usize) -> f64 {
    let (k_, i_) = ((k + i) as i64, i as i64);
    let delta = dist.delta();
    let num = coeffs::falling(&(k_ as f64), i) * coeffs::prod_one_minus(k_ - 1, k_ + i_ - 2, &delta);
    (num / dist.moment_q_power(i)).sqrt()
}

impl RecurrenceTable {
    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    /// `a_0 ..= a_K`.
    pub fn recur_a(&self) -> &[f64] {
        &self.recur_a
    }

    /// `b_0 ..= b_K`, with `b_0 = 1` the total mass.
    pub fn recur_b(&self) -> &[f64] {
        &self.recur_b
    }

    /// Rodrigues norms `h_0 ..= h_K`. They overflow to `inf` for very high
    /// degrees; nothing in the bound engine needs them beyond order `m+n`.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    fn check(&self, k: usize) -> Result<(), OrthoError> {
        if k > self.degree_cap {
            Err(OrthoError::DegreeExceeded { requested: k, cap: self.degree_cap })
        } else {
            Ok(())
        }
    }

    /// `phi_k(x)`.
    pub fn evaluate_phi(&self, k: usize, x: f64) -> Result<f64, OrthoError> {
        self.check(k)?;
        Ok(*self.phi_values(x, k).last().unwrap())
    }

    /// `phi_0(x) ..= phi_upto(x)`; `upto` must not exceed the cap.
    pub fn phi_values(&self, x: f64, upto: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(upto + 1);
        out.push(1.0);
        if upto == 0 {
            return out;
        }
        let mut prev = 0.0;
        let mut cur = 1.0;
        for k in 0..upto {
            let next = ((x - self.recur_a[k]) * cur - self.recur_b[k].sqrt() * prev) / self.recur_b[k + 1].sqrt();
            prev = cur;
            cur = next;
            out.push(cur);
        }
        out
    }

    /// Power-basis coefficients of `phi_k`, expanded from the recurrence.
    pub fn phi_polynomial(&self, k: usize) -> Result<Polynomial, OrthoError> {
        self.check(k)?;
        let mut prev = Polynomial::constant(0.0);
        let mut cur = Polynomial::constant(1.0);
        for j in 0..k {
            let shifted = &(&Polynomial::x() * &cur) - &cur.scale(self.recur_a[j]);
            let next = if j == 0 { shifted } else { &shifted - &prev.scale(self.recur_b[j].sqrt()) };
            prev = cur;
            cur = next.scale(1.0 / self.recur_b[j + 1].sqrt());
        }
        Ok(cur)
    }

    /// `P_k(x) = sqrt(h_k) phi_k(x)`.
    pub fn rodrigues_polynomial(&self, k: usize) -> Result<Polynomial, OrthoError> {
        Ok(self.phi_polynomial(k)?.scale(self.norms[k].sqrt()))
    }
}
