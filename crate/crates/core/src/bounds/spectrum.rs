//! Fourier side: coefficients `c_k = E g(X) phi_k(X)` and the spectral
//! forms of the derivative moments.

use crate::funcspace::Expr;
use crate::orthopoly::{gauss_rule_from_table, recurrence};
use crate::pearson::PearsonDistribution;

use super::coeffs::pi_coefficient;
use super::moments::node_values;
use super::{BoundsError, Settings};

/// Spectral truncation used for cross-checks of a bound of type `(m, n)`.
pub fn spectral_truncation(m: usize, n: usize) -> usize {
    m + n + 16
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    coefficients: Vec<f64>,
    variance: f64,
    tail_estimate: f64,
}

/// `c_0 ..= c_K`, with a rule of at least `2K` nodes.
pub fn fourier_coefficients(
    dist: &PearsonDistribution,
    g: &Expr,
    truncation: usize,
    settings: &Settings,
) -> Result<FourierSpectrum, BoundsError> {
    let size = settings.quad_size.max(2 * truncation).max(1);
    let table = recurrence(dist, size.max(truncation))?;
    let rule = gauss_rule_from_table(&table, size)?.with_summation(settings.summation);
    let values = node_values(&rule, g, 0)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(BoundsError::Divergent("g is not finite at every quadrature node".into()));
    }
    let phis: Vec<Vec<f64>> = rule.nodes().iter().map(|&x| table.phi_values(x, truncation)).collect();
    let coefficients: Vec<f64> = (0..=truncation)
        .map(|k| {
            let terms: Vec<f64> = values.iter().zip(&phis).map(|(v, p)| v * p[k]).collect();
            rule.expect_values(&terms)
        })
        .collect();
    let mean = coefficients[0];
    let centred: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let variance = rule.expect_values(&centred);
    if !variance.is_finite() {
        return Err(BoundsError::Divergent("E g^2 is not finite".into()));
    }
    let captured = settings.summation.sum(coefficients[1..].iter().map(|c| c * c));
    Ok(FourierSpectrum { coefficients, variance, tail_estimate: (variance - captured).abs() })
}

impl FourierSpectrum {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `|Var - sum_{k=1}^K c_k^2|`.
    pub fn tail_estimate(&self) -> f64 {
        self.tail_estimate
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// `sum_{k>=i} pi_{k;i} c_k^2`, the spectral form of `E q^i (g^(i))^2`.
    pub fn quadratic_moment(&self, i: usize, delta: f64) -> f64 {
        let mut acc = crate::summation::Accumulator::default();
        for (k, c) in self.coefficients.iter().enumerate().skip(i) {
            acc.add(pi_coefficient(k, i, &delta) * c * c);
        }
        acc.value()
    }

    /// `sqrt(h_i) c_i`, the spectral form of `E q^i g^(i)`.
    pub fn linear_moment(&self, i: usize, dist: &PearsonDistribution) -> f64 {
        crate::orthopoly::rodrigues_norm(dist, i).sqrt() * self.coefficients[i]
    }
}

/// `|E P_k(X) g(X) - E q^k(X) g^(k)(X)|` with `P_k` expanded in the power
/// basis from the recurrence.
pub fn stein_residual(
    dist: &PearsonDistribution,
    g: &Expr,
    k: usize,
    settings: &Settings,
) -> Result<f64, BoundsError> {
    let table = recurrence(dist, settings.quad_size.max(k))?;
    let rule = gauss_rule_from_table(&table, settings.quad_size)?.with_summation(settings.summation);
    let p = table.rodrigues_polynomial(k)?;
    let values = node_values(&rule, g, 0)?;
    let lhs_terms: Vec<f64> = rule.nodes().iter().zip(&values).map(|(&x, v)| p.eval(x) * v).collect();
    let lhs = rule.expect_values(&lhs_terms);
    let gk = crate::funcspace::differentiate(g, k);
    let q = dist.quadratic();
    let dk = node_values(&rule, &gk, k)?;
    let rhs_terms: Vec<f64> = rule.nodes().iter().zip(&dk).map(|(&x, v)| q.eval(x).powi(k as i32) * v).collect();
    Ok((lhs - rule.expect_values(&rhs_terms)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::parse;
    use approx::assert_relative_eq;

    #[test]
    fn hermite_expansion_of_x_squared() {
        let d = PearsonDistribution::normal(0.0, 1.0).unwrap();
        let s = fourier_coefficients(&d, &parse("x^2").unwrap(), 6, &Settings::default()).unwrap();
        let expect = [1.0, 0.0, 2f64.sqrt(), 0.0, 0.0, 0.0, 0.0];
        for (c, e) in s.coefficients().iter().zip(expect) {
            assert!((c - e).abs() < 1e-13, "{c} vs {e}");
        }
        assert_relative_eq!(s.variance(), 2.0, max_relative = 1e-13);
        assert!(s.tail_estimate() < 1e-13);
    }

    #[test]
    fn exponential_coefficients_follow_the_generating_function() {
        let d = PearsonDistribution::normal(0.0, 1.0).unwrap();
        let s = fourier_coefficients(&d, &parse("exp(x)").unwrap(), 12, &Settings::default()).unwrap();
        let mut fact = 1.0;
        for (k, c) in s.coefficients().iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert_relative_eq!(*c, 0.5f64.exp() / fact.sqrt(), epsilon = 1e-14, max_relative = 1e-12);
        }
    }

    #[test]
    fn stein_identity_for_normal_cubic() {
        let d = PearsonDistribution::normal(0.0, 1.0).unwrap();
        for k in 0..5 {
            assert!(stein_residual(&d, &parse("x^3 + sin(x)").unwrap(), k, &Settings::default()).unwrap() < 1e-12);
        }
    }
}
