use crate::funcspace::{derivative_chain, EvalError, Expr};
use crate::orthopoly::{gauss_rule, QuadratureRule};
use crate::pearson::PearsonDistribution;

use super::{BoundsError, Settings};

/// Quadrature estimates of every expectation a bound of order up to
/// `order` can need.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeMoments {
    order: usize,
    /// `E q^i(X)`, closed form.
    q_moments: Vec<f64>,
    /// `E q^i(X) g^(i)(X)`.
    linear: Vec<f64>,
    /// `E q^i(X) (g^(i)(X))^2`.
    quadratic: Vec<f64>,
    mean: f64,
    variance: f64,
}

/// Values of `expr` at the nodes carrying positive weight; other nodes get 0.
pub(crate) fn node_values(rule: &QuadratureRule, expr: &Expr, order: usize) -> Result<Vec<f64>, BoundsError> {
    rule.nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&x, &w)| {
            if w == 0.0 {
                return Ok(0.0);
            }
            match expr.eval(x) {
                Ok(v) => Ok(v),
                Err(EvalError::NotANumber) => Ok(f64::NAN),
                Err(source) => Err(BoundsError::Eval { order, x, source }),
            }
        })
        .collect()
}

impl DerivativeMoments {
    pub fn compute(
        dist: &PearsonDistribution,
        g: &Expr,
        order: usize,
        settings: &Settings,
    ) -> Result<Self, BoundsError> {
        let rule = gauss_rule(dist, settings.quad_size)?.with_summation(settings.summation);
        Self::with_rule(dist, g, order, &rule)
    }

    pub fn with_rule(
        dist: &PearsonDistribution,
        g: &Expr,
        order: usize,
        rule: &QuadratureRule,
    ) -> Result<Self, BoundsError> {
        let q = dist.quadratic();
        let qx: Vec<f64> = rule.nodes().iter().map(|&x| q.eval(x)).collect();
        let chain = derivative_chain(g, order);
        let mut linear = Vec::with_capacity(order + 1);
        let mut quadratic = Vec::with_capacity(order + 1);
        let mut mean = 0.0;
        let mut variance = 0.0;
        for (i, gi) in chain.iter().enumerate() {
            let values = node_values(rule, gi, i)?;
            let weighted: Vec<f64> = values.iter().zip(&qx).map(|(v, qv)| v * qv.powi(i as i32)).collect();
            let lin = rule.expect_values(&weighted);
            let squares: Vec<f64> = weighted.iter().zip(&values).map(|(wv, v)| wv * v).collect();
            linear.push(lin);
            quadratic.push(rule.expect_values(&squares));
            if i == 0 {
                mean = lin;
                let centred: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
                variance = rule.expect_values(&centred);
            }
        }
        Ok(DerivativeMoments {
            order,
            q_moments: (0..=order).map(|i| dist.moment_q_power(i)).collect(),
            linear,
            quadratic,
            mean,
            variance,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn q_moments(&self) -> &[f64] {
        &self.q_moments
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn quadratic(&self) -> &[f64] {
        &self.quadratic
    }

    /// `E g(X)`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `Var g(X)`, by the two-pass formula.
    pub fn variance(&self) -> f64 {
        self.variance
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::parse;
    use approx::assert_relative_eq;

    #[test]
    fn normal_exponential_moments() {
        let d = PearsonDistribution::normal(0.0, 1.0).unwrap();
        let m = DerivativeMoments::compute(&d, &parse("exp(x)").unwrap(), 3, &Settings::default()).unwrap();
        let e = std::f64::consts::E;
        assert_relative_eq!(m.variance(), e * e - e, max_relative = 1e-13);
        for i in 0..=3 {
            assert_relative_eq!(m.linear()[i], e.sqrt(), max_relative = 1e-13);
            assert_relative_eq!(m.quadratic()[i], e * e, max_relative = 1e-13);
        }
    }

    #[test]
    fn constants_have_zero_variance() {
        let d = PearsonDistribution::beta(2.0, 3.0).unwrap();
        let m = DerivativeMoments::compute(&d, &parse("3.5").unwrap(), 1, &Settings::default()).unwrap();
        assert!(m.variance() < 1e-28);
        assert_eq!(m.quadratic()[1], 0.0);
    }

    #[test]
    fn domain_errors_surface() {
        let d = PearsonDistribution::normal(0.0, 1.0).unwrap();
        let err = DerivativeMoments::compute(&d, &parse("sqrt(x)").unwrap(), 1, &Settings::default()).unwrap_err();
        assert!(matches!(err, BoundsError::Eval { order: 0, .. }));
    }
}
