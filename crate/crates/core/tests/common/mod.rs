//! Shared fixtures: the member catalog and a tanh-sinh integrator that never
//! touches the Gauss rules under test.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use varbound::funcspace::{differentiate, parse, Expr};
use varbound::pearson::{parse_literal, Endpoint, PearsonDistribution};

pub struct Case {
    pub dist: &'static str,
    pub g: &'static str,
    pub m: usize,
    pub n: usize,
}

impl Case {
    pub fn distribution(&self) -> PearsonDistribution {
        parse_literal(self.dist).unwrap()
    }

    pub fn function(&self) -> Expr {
        parse(self.g).unwrap()
    }

    pub fn label(&self) -> String {
        format!("{} g={} (m={}, n={})", self.dist, self.g, self.m, self.n)
    }
}

const fn case(dist: &'static str, g: &'static str, m: usize, n: usize) -> Case {
    Case { dist, g, m, n }
}

/// Member cases with `m + n <= 5` over normal, gamma, beta and two general
/// Pearson literals. Every `g` has geometrically decaying Fourier coefficients.
pub const CATALOG: &[Case] = &[
    case("normal:mu=0,sigma2=1", "x^2", 0, 1),
    case("normal:mu=0,sigma2=1", "x^3", 1, 1),
    case("normal:mu=0,sigma2=1", "exp(x)", 0, 2),
    case("normal:mu=0,sigma2=1", "sin(x)", 2, 1),
    case("normal:mu=1,sigma2=2", "exp(x/2)", 1, 2),
    case("gamma:alpha=2,theta=1", "x^3", 0, 2),
    case("gamma:alpha=2,theta=5", "exp(x)", 1, 1),
    case("gamma:alpha=3,theta=2", "x*exp(-x)", 2, 2),
    case("gamma:alpha=3,theta=4", "sin(x)", 1, 2),
    case("beta:alpha=2,beta=3", "exp(x)", 1, 2),
    case("beta:alpha=2,beta=3", "sin(3*x)", 2, 3),
    case("beta:alpha=2,beta=2", "log(1+x)", 0, 3),
    case("pearson:mu=0,delta=-0.25,beta=0,gamma=1", "cos(x)", 2, 2),
    case("pearson:mu=0,delta=-0.25,beta=0,gamma=1", "log(x+3)", 1, 3),
    case("pearson:mu=0,delta=0,beta=-1,gamma=1", "exp(x/4)", 1, 1),
];

const LEVEL_STEP: f64 = 1.0 / 128.0;
const T_MAX: f64 = 4.5;

/// `E h(X)` by tanh-sinh (finite support), exp-sinh (half line) or
/// sinh-sinh (whole line) quadrature against the closed-form density.
pub fn expect<F: Fn(f64) -> f64>(dist: &PearsonDistribution, h: F) -> f64 {
    let s = dist.support();
    let steps = (T_MAX / LEVEL_STEP) as i64;
    let mut acc = 0.0;
    let mut comp = 0.0;
    for j in -steps..=steps {
        let t = j as f64 * LEVEL_STEP;
        let u = FRAC_PI_2 * t.sinh();
        let du = FRAC_PI_2 * t.cosh();
        let (x, w) = match (s.lo, s.hi) {
            (Endpoint::Finite(a), Endpoint::Finite(b)) => {
                let half = 0.5 * (b - a);
                let c = u.cosh();
                // 1 - tanh and 1 + tanh without cancellation near the ends.
                let x = if u > 0.0 { b - half * 2.0 / ((2.0 * u).exp() + 1.0) } else { a + half * 2.0 / ((-2.0 * u).exp() + 1.0) };
                (x, half * du / (c * c))
            }
            (Endpoint::Finite(a), Endpoint::PosInf) => (a + u.exp(), du * u.exp()),
            (Endpoint::NegInf, Endpoint::Finite(b)) => (b - u.exp(), du * u.exp()),
            _ => (u.sinh(), du * u.cosh()),
        };
        if !w.is_finite() || w == 0.0 || !s.contains(x) {
            continue;
        }
        let f = dist.density(x).unwrap();
        if f == 0.0 {
            continue;
        }
        let term = LEVEL_STEP * w * f * h(x);
        if !term.is_finite() {
            continue;
        }
        let y = term - comp;
        let next = acc + y;
        comp = (next - acc) - y;
        acc = next;
    }
    acc
}

pub fn eval(e: &Expr, x: f64) -> f64 {
    e.eval(x).unwrap_or(f64::NAN)
}

/// `Var g(X)` via the oracle integrator.
pub fn oracle_variance(dist: &PearsonDistribution, g: &Expr) -> f64 {
    let mean = expect(dist, |x| eval(g, x));
    expect(dist, |x| (eval(g, x) - mean).powi(2))
}

/// `E q^i (g^(i))^2` via the oracle integrator.
pub fn oracle_quadratic(dist: &PearsonDistribution, g: &Expr, i: usize) -> f64 {
    let gi = differentiate(g, i);
    let q = dist.quadratic();
    expect(dist, |x| q.eval(x).powi(i as i32) * eval(&gi, x).powi(2))
}

/// `E q^i g^(i)` via the oracle integrator.
pub fn oracle_linear(dist: &PearsonDistribution, g: &Expr, i: usize) -> f64 {
    let gi = differentiate(g, i);
    let q = dist.quadratic();
    expect(dist, |x| q.eval(x).powi(i as i32) * eval(&gi, x))
}

/// Power-basis coefficients as a DSL expression.
pub fn polynomial_expr(coeffs: &[f64]) -> String {
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        terms.push(match k {
            0 => format!("({c:e})"),
            1 => format!("({c:e})*x"),
            _ => format!("({c:e})*x^{k}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
