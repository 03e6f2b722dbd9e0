use proptest::prelude::*;
use varbound::funcspace::{differentiate, parse, Expr, Func};

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        3 => Just(Expr::Var),
        1 => (-4i32..=4).prop_map(|c| Expr::Const(c as f64 / 2.0)),
    ]
}

/// Expressions defined and smooth on the whole line.
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 1i32..=3).prop_map(|(a, c)| Expr::Div(Box::new(a), Box::new(Expr::Const(c as f64)))),
            (inner.clone(), 0i32..=3).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            (inner.clone(), prop_oneof![Just(Func::Sin), Just(Func::Cos)])
                .prop_map(|(a, f)| Expr::Call(f, Box::new(a))),
            inner.prop_map(|a| Expr::Call(Func::Exp, Box::new(Expr::Call(Func::Sin, Box::new(a))))),
        ]
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

const POINTS: [f64; 5] = [-1.3, -0.4, 0.0, 0.7, 1.1];

/// Five-point central difference.
fn numeric_derivative(e: &Expr, x: f64) -> f64 {
    let h = 1e-3;
    let f = |t: f64| e.eval(t).unwrap();
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_preserves_meaning(e in expr()) {
        let text = e.to_string();
        let back = parse(&text).unwrap_or_else(|err| panic!("{text:?}: {err}"));
        prop_assert_eq!(back.to_string(), text.clone());
        for x in POINTS {
            prop_assert!(close(back.eval(x).unwrap(), e.eval(x).unwrap(), 1e-12), "{} at {}", text, x);
        }
    }

    #[test]
    fn derivative_orders_compose(e in expr(), a in 0usize..3, b in 0usize..3) {
        let stepwise = differentiate(&differentiate(&e, a), b);
        let direct = differentiate(&e, a + b);
        for x in POINTS {
            let (s, d) = (stepwise.eval(x).unwrap(), direct.eval(x).unwrap());
            prop_assert!(close(s, d, 1e-9), "{} order {}+{}: {} vs {}", e, a, b, s, d);
        }
    }

    #[test]
    fn derivative_matches_finite_differences(e in expr()) {
        let d = differentiate(&e, 1);
        for x in POINTS {
            let (exact, approx) = (d.eval(x).unwrap(), numeric_derivative(&e, x));
            prop_assert!(close(exact, approx, 1e-6), "{} at {}: {} vs {}", e, x, exact, approx);
        }
    }

    #[test]
    fn polynomials_vanish_past_their_degree(coeffs in prop::collection::vec(-5i32..=5, 1..8)) {
        let mut coeffs: Vec<f64> = coeffs.into_iter().map(f64::from).collect();
        if *coeffs.last().unwrap() == 0.0 {
            *coeffs.last_mut().unwrap() = 1.0;
        }
        let degree = coeffs.len() - 1;
        let text = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("({c})*x^{k}"))
            .collect::<Vec<_>>()
            .join(" + ");
        let p = parse(&text).unwrap();
        prop_assert_eq!(p.polynomial_degree(), Some(degree));
        prop_assert!(differentiate(&p, degree + 1).is_zero());
        let top = differentiate(&p, degree);
        let factorial: f64 = (1..=degree).map(|v| v as f64).product();
        prop_assert_eq!(top.eval(0.37).unwrap(), factorial * coeffs[degree]);
        for x in POINTS {
            let horner = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            prop_assert!(close(p.eval(x).unwrap(), horner, 1e-13));
        }
    }
}

#[test]
fn syntax_errors_carry_offsets() {
    for (text, offset) in [("2+*x", 2), ("sin(x", 5), ("x^1.5", 2), ("foo(x)", 0)] {
        let err = parse(text).unwrap_err();
        assert_eq!(err.offset, offset, "{text}: {err}");
    }
}
