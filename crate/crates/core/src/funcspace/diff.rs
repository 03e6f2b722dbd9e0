//! Symbolic differentiation with light simplification.
//!
//! The builders fold constants and apply zero/one identities, keep constant
//! factors on the left and merge nested constant products. No algebraic or
//! trigonometric rewriting beyond that.

use super::expr::{Expr, Func};

pub fn constant(c: f64) -> Expr {
    Expr::Const(c)
}

fn as_const(e: &Expr) -> Option<f64> {
    match e {
        Expr::Const(c) => Some(*c),
        _ => None,
    }
}

pub fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => match b {
            Expr::Neg(inner) => Expr::Sub(Box::new(a), inner),
            b => Expr::Add(Box::new(a), Box::new(b)),
        },
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        (Some(x), _) if x == 0.0 => neg(b),
        (_, Some(y)) if y == 0.0 => a,
        _ => match b {
            Expr::Neg(inner) => Expr::Add(Box::new(a), inner),
            b => Expr::Sub(Box::new(a), Box::new(b)),
        },
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::Const(0.0),
        (Some(x), _) if x == 1.0 => b,
        (_, Some(y)) if y == 1.0 => a,
        (Some(x), _) if x == -1.0 => neg(b),
        (_, Some(y)) if y == -1.0 => neg(a),
        (None, Some(_)) => mul(b, a),
        (Some(x), None) => match b {
            Expr::Mul(l, r) if as_const(&l).is_some() => mul(Expr::Const(x * as_const(&l).unwrap()), *r),
            Expr::Neg(inner) => mul(Expr::Const(-x), *inner),
            b => Expr::Mul(Box::new(a), Box::new(b)),
        },
        (None, None) => match (a, b) {
            (Expr::Neg(l), r) => neg(mul(*l, r)),
            (l, Expr::Neg(r)) => neg(mul(l, *r)),
            (l, r) => Expr::Mul(Box::new(l), Box::new(r)),
        },
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) if y != 0.0 => Expr::Const(x / y),
        (Some(x), _) if x == 0.0 => Expr::Const(0.0),
        (_, Some(y)) if y == 1.0 => a,
        (_, Some(y)) if y == -1.0 => neg(a),
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub fn pow(a: Expr, k: i32) -> Expr {
    match (k, as_const(&a)) {
        (0, _) => Expr::Const(1.0),
        (1, _) => a,
        (_, Some(c)) if c != 0.0 || k > 0 => Expr::Const(c.powi(k)),
        _ => match a {
            Expr::Pow(inner, j) if j.checked_mul(k).is_some() => pow(*inner, j * k),
            a => Expr::Pow(Box::new(a), k),
        },
    }
}

pub fn call(f: Func, a: Expr) -> Expr {
    if let Some(c) = as_const(&a) {
        let folded = Expr::Call(f, Box::new(a.clone())).eval(0.0);
        if let Ok(v) = folded {
            if v.is_finite() && c.is_finite() {
                return Expr::Const(v);
            }
        }
    }
    Expr::Call(f, Box::new(a))
}

/// Rebuilds `e` bottom-up through the simplifying builders.
pub fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Var => e.clone(),
        Expr::Neg(a) => neg(simplify(a)),
        Expr::Add(a, b) => add(simplify(a), simplify(b)),
        Expr::Sub(a, b) => sub(simplify(a), simplify(b)),
        Expr::Mul(a, b) => mul(simplify(a), simplify(b)),
        Expr::Div(a, b) => div(simplify(a), simplify(b)),
        Expr::Pow(a, k) => pow(simplify(a), *k),
        Expr::Call(f, a) => call(*f, simplify(a)),
    }
}

fn derivative(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => constant(0.0),
        Expr::Var => constant(1.0),
        Expr::Neg(a) => neg(derivative(a)),
        Expr::Add(a, b) => add(derivative(a), derivative(b)),
        Expr::Sub(a, b) => sub(derivative(a), derivative(b)),
        Expr::Mul(a, b) => add(mul(derivative(a), (**b).clone()), mul((**a).clone(), derivative(b))),
        Expr::Div(a, b) => div(
            sub(mul(derivative(a), (**b).clone()), mul((**a).clone(), derivative(b))),
            pow((**b).clone(), 2),
        ),
        Expr::Pow(a, k) => mul(mul(constant(*k as f64), pow((**a).clone(), k - 1)), derivative(a)),
        Expr::Call(f, a) => {
            let inner = (**a).clone();
            let outer = match f {
                Func::Exp => call(Func::Exp, inner),
                Func::Log => div(constant(1.0), inner),
                Func::Sin => call(Func::Cos, inner),
                Func::Cos => neg(call(Func::Sin, inner)),
                Func::Sqrt => div(constant(0.5), call(Func::Sqrt, inner)),
            };
            mul(derivative(a), outer)
        }
    }
}

/// `order`-th derivative of `g`.
pub fn differentiate(g: &Expr, order: usize) -> Expr {
    let mut d = simplify(g);
    for _ in 0..order {
        if d.is_zero() {
            break;
        }
        d = derivative(&d);
    }
    d
}

/// `g, g', ..., g^(order)`, each obtained from the previous one.
pub fn derivative_chain(g: &Expr, order: usize) -> Vec<Expr> {
    let mut out = Vec::with_capacity(order + 1);
    out.push(simplify(g));
    for i in 0..order {
        let next = derivative(&out[i]);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::parse;

    fn d(text: &str, order: usize) -> String {
        differentiate(&parse(text).unwrap(), order).to_string()
    }

    #[test]
    fn calculus_examples() {
        assert_eq!(d("x^3", 2), "6*x");
        assert_eq!(d("exp(x)", 7), "exp(x)");
        assert_eq!(d("sin(x)", 4), "sin(x)");
        assert_eq!(d("x^3", 4), "0");
        assert_eq!(d("5", 1), "0");
    }

    #[test]
    fn chain_rule_and_quotients() {
        let g = parse("log(1 + x^2) / sqrt(x)").unwrap();
        let g1 = differentiate(&g, 1);
        let h = 1e-6;
        for x in [0.3, 1.0, 2.5] {
            let fd = (g.eval(x + h).unwrap() - g.eval(x - h).unwrap()) / (2.0 * h);
            assert!((g1.eval(x).unwrap() - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn builders_fold() {
        assert_eq!(mul(constant(2.0), mul(constant(3.0), Expr::Var)), mul(constant(6.0), Expr::Var));
        assert_eq!(mul(Expr::Var, constant(2.0)).to_string(), "2*x");
        assert_eq!(neg(neg(Expr::Var)), Expr::Var);
        assert_eq!(pow(pow(Expr::Var, 2), 3), Expr::Pow(Box::new(Expr::Var), 6));
        assert_eq!(call(Func::Log, constant(-1.0)).to_string(), "log(-1)");
        assert_eq!(add(Expr::Var, neg(Expr::Var)).to_string(), "x - x");
    }

    #[test]
    fn chain_matches_direct() {
        let g = parse("x*exp(-x)").unwrap();
        let chain = derivative_chain(&g, 4);
        for (i, di) in chain.iter().enumerate() {
            assert_eq!(*di, differentiate(&g, i));
        }
    }
}
