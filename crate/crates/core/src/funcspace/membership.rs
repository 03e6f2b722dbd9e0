//! Numerical diagnosis of the finiteness conditions on `g`.
//!
//! Each expectation is estimated with Gauss rules of 16, 32, ..., 256
//! nodes. A sequence that grows by more than a factor two over three
//! consecutive doublings, or that overflows, is declared divergent.

use serde::Serialize;
use thiserror::Error;

use crate::orthopoly::{gauss_rule_from_table, recurrence, OrthoError, QuadratureRule};
use crate::pearson::PearsonDistribution;

use super::diff::derivative_chain;
use super::expr::{EvalError, Expr};

pub const PROBE_SIZES: [usize; 5] = [16, 32, 64, 128, 256];
const GROWTH: f64 = 2.0;
const RUN: usize = 3;
const SETTLED: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MembershipError {
    #[error("g^({order}) is undefined at x = {x} inside the support: {source}")]
    EvalDomain { order: usize, x: f64, source: EvalError },
    #[error(transparent)]
    Quadrature(#[from] OrthoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Member,
    TrivialBound,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finiteness {
    Finite,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub m: usize,
    pub n: usize,
    pub ell: usize,
    /// `E q^i (g^(i))^2 < inf` for `i = 0..=n`.
    pub finite_quadratic: Vec<bool>,
    /// `E q^i |g^(i)| < inf` for `i = 0..=ell`.
    pub finite_linear: Vec<bool>,
    pub verdict: Verdict,
    /// Which condition failed or could not be settled.
    pub diagnostic: Option<String>,
}

/// Classifies a sequence of non-negative estimates taken at doubling sizes.
pub fn classify(estimates: &[f64]) -> Finiteness {
    if estimates.iter().any(|v| !v.is_finite()) {
        return Finiteness::Divergent;
    }
    let mut run = 0;
    for w in estimates.windows(2) {
        if w[1] > GROWTH * w[0] && w[1] > f64::MIN_POSITIVE {
            run += 1;
            if run >= RUN {
                return Finiteness::Divergent;
            }
        } else {
            run = 0;
        }
    }
    match estimates {
        [.., a, b] => {
            let scale = a.abs().max(b.abs());
            if scale == 0.0 || (b - a).abs() <= SETTLED * scale {
                Finiteness::Finite
            } else {
                Finiteness::Inconclusive
            }
        }
        _ => Finiteness::Inconclusive,
    }
}

struct Probe {
    rules: Vec<QuadratureRule>,
}

impl Probe {
    fn new(dist: &PearsonDistribution) -> Result<Self, OrthoError> {
        let largest = *PROBE_SIZES.last().unwrap();
        let table = recurrence(dist, largest)?;
        let rules = PROBE_SIZES.iter().map(|&k| gauss_rule_from_table(&table, k)).collect::<Result<_, _>>()?;
        Ok(Probe { rules })
    }

    /// Estimates of `E q^i h(g^(i))` at every probe size.
    fn estimates<F: Fn(f64) -> f64>(
        &self,
        dist: &PearsonDistribution,
        gi: &Expr,
        order: usize,
        transform: F,
    ) -> Result<Vec<f64>, MembershipError> {
        let q = dist.quadratic();
        let mut out = Vec::with_capacity(self.rules.len());
        for rule in &self.rules {
            let mut values = Vec::with_capacity(rule.len());
            for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
                if w == 0.0 {
                    values.push(0.0);
                    continue;
                }
                let v = match gi.eval(x) {
                    Ok(v) => v,
                    // overflow cancellation far in a tail, e.g. inf - inf
                    Err(EvalError::NotANumber) => f64::INFINITY,
                    Err(source) => return Err(MembershipError::EvalDomain { order, x, source }),
                };
                values.push(q.eval(x).powi(order as i32) * transform(v));
            }
            out.push(rule.expect_values(&values));
        }
        Ok(out)
    }
}

/// Finiteness of `E q^i (g^(i))^2` and `E q^i |g^(i)|` for `i = 0..=order`,
/// from which membership in any `H^{m,n}` with `max(m, n) <= order` follows.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipProbe {
    quadratic: Vec<Finiteness>,
    linear: Vec<Finiteness>,
}

impl MembershipProbe {
    pub fn run(dist: &PearsonDistribution, g: &Expr, order: usize) -> Result<Self, MembershipError> {
        let probe = Probe::new(dist)?;
        let chain = derivative_chain(g, order);
        let mut quadratic = Vec::with_capacity(order + 1);
        let mut linear = Vec::with_capacity(order + 1);
        for (i, gi) in chain.iter().enumerate() {
            quadratic.push(classify(&probe.estimates(dist, gi, i, |v| v * v)?));
            linear.push(classify(&probe.estimates(dist, gi, i, f64::abs)?));
        }
        Ok(MembershipProbe { quadratic, linear })
    }

    pub fn order(&self) -> usize {
        self.quadratic.len() - 1
    }

    pub fn quadratic(&self) -> &[Finiteness] {
        &self.quadratic
    }

    pub fn linear(&self) -> &[Finiteness] {
        &self.linear
    }

    /// Verdict for `H^{m,n}`; panics if `max(m, n)` exceeds the probed order.
    pub fn report(&self, m: usize, n: usize) -> MembershipReport {
        let ell = m.max(n);
        assert!(ell <= self.order(), "membership probed to order {} only", self.order());
        let quadratic = &self.quadratic[..=n];
        let linear = &self.linear[..=ell];
        // H_2 plus the linear moments entering the bound itself
        let required = quadratic
            .iter()
            .enumerate()
            .map(|(i, f)| (format!("E q^{i} (g^({i}))^2"), *f))
            .chain(linear.iter().enumerate().skip(1).take(m).map(|(i, f)| (format!("E q^{i} |g^({i})|"), *f)));
        let mut verdict = Verdict::Member;
        let mut diagnostic = None;
        for (what, f) in required {
            match f {
                Finiteness::Finite => {}
                Finiteness::Divergent => {
                    verdict = Verdict::TrivialBound;
                    diagnostic = Some(format!("{what} diverges"));
                    break;
                }
                Finiteness::Inconclusive => {
                    if verdict == Verdict::Member {
                        verdict = Verdict::Unknown;
                        diagnostic = Some(format!("{what} did not settle under quadrature refinement"));
                    }
                }
            }
        }
        MembershipReport {
            m,
            n,
            ell,
            finite_quadratic: quadratic.iter().map(|f| *f == Finiteness::Finite).collect(),
            finite_linear: linear.iter().map(|f| *f == Finiteness::Finite).collect(),
            verdict,
            diagnostic,
        }
    }
}

/// Checks the conditions for `g` in the class `H^{m,n}(X)`.
pub fn check_membership(
    dist: &PearsonDistribution,
    g: &Expr,
    m: usize,
    n: usize,
) -> Result<MembershipReport, MembershipError> {
    Ok(MembershipProbe::run(dist, g, m.max(n))?.report(m, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::parse;

    fn verdict(dist: PearsonDistribution, g: &str, m: usize, n: usize) -> Verdict {
        check_membership(&dist, &parse(g).unwrap(), m, n).unwrap().verdict
    }

    #[test]
    fn examples() {
        let normal = PearsonDistribution::normal(0.0, 1.0).unwrap();
        assert_eq!(verdict(normal.clone(), "x^2", 1, 1), Verdict::Member);
        for n in 0..3 {
            assert_eq!(verdict(normal.clone(), "exp(x^2/3)", 0, n), Verdict::TrivialBound);
        }
        let gamma = PearsonDistribution::gamma(2.0, 1.0).unwrap();
        assert_eq!(verdict(gamma, "log(x)", 0, 1), Verdict::Member);
    }

    #[test]
    fn report_shape() {
        let d = PearsonDistribution::normal(0.0, 1.0).unwrap();
        let r = check_membership(&d, &parse("exp(x)").unwrap(), 3, 1).unwrap();
        assert_eq!(r.ell, 3);
        assert_eq!(r.finite_quadratic, vec![true, true]);
        assert_eq!(r.finite_linear, vec![true; 4]);
    }

    #[test]
    fn undefined_inside_support_is_an_error() {
        let d = PearsonDistribution::normal(0.0, 1.0).unwrap();
        let err = check_membership(&d, &parse("log(x)").unwrap(), 0, 1).unwrap_err();
        assert!(matches!(err, MembershipError::EvalDomain { order: 0, .. }));
    }

    #[test]
    fn classifier() {
        assert_eq!(classify(&[1.0, 1.0, 1.0, 1.0, 1.0]), Finiteness::Finite);
        assert_eq!(classify(&[1.0, 3.0, 9.0, 27.0, 81.0]), Finiteness::Divergent);
        assert_eq!(classify(&[1.0, f64::INFINITY]), Finiteness::Divergent);
        assert_eq!(classify(&[1.0, 1.5, 2.25, 3.4, 5.1]), Finiteness::Inconclusive);
        assert_eq!(classify(&[0.0; 5]), Finiteness::Finite);
    }
}
