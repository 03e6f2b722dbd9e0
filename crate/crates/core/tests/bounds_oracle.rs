mod common;

use num::ToPrimitive;
use proptest::prelude::*;
use varbound::bounds::coeffs::residual_coefficient;
use varbound::bounds::{fourier_coefficients, lookup, registry, Engine, Settings};
use varbound::exactcheck::{build_a, cramer_solve, Rational};
use varbound::funcspace::parse;
use varbound::pearson::PearsonDistribution;
use varbound::scalar::parse_rational;
use varbound::summation::Summation;

fn settings() -> Settings {
    Settings::default()
}

#[test]
fn derivative_moments_match_the_integrator() {
    for c in common::CATALOG {
        let (d, g) = (c.distribution(), c.function());
        let order = c.m + c.n;
        let e = Engine::new(&d, &g, order, &settings()).unwrap();
        let var = common::oracle_variance(&d, &g);
        assert!((e.variance().unwrap() - var).abs() < 1e-9 * var.max(1.0), "{}", c.label());
        for i in 0..=order {
            let q = common::oracle_quadratic(&d, &g, i);
            let l = common::oracle_linear(&d, &g, i);
            let (mq, ml) = (e.moments().quadratic()[i], e.moments().linear()[i]);
            assert!((mq - q).abs() < 1e-9 * q.abs().max(1.0), "{} i={i}: {mq} vs {q}", c.label());
            assert!((ml - l).abs() < 1e-9 * l.abs().max(1.0), "{} i={i}: {ml} vs {l}", c.label());
        }
    }
}

#[test]
fn lambda_matches_exact_cramer_solution() {
    let universal = lookup("universal").unwrap();
    for (delta_text, dist) in [
        ("0", PearsonDistribution::normal(0.0, 1.0).unwrap()),
        ("0", PearsonDistribution::gamma(2.0, 1.0).unwrap()),
        ("-1/5", PearsonDistribution::beta(2.0, 3.0).unwrap()),
        ("-1/4", PearsonDistribution::canonicalize(0.0, -0.25, 0.0, 1.0).unwrap()),
    ] {
        let delta = parse_rational(delta_text).unwrap();
        assert!((delta.to_f64().unwrap() - dist.delta()).abs() < 1e-15);
        for m in 0..=5 {
            for n in 1..=5 {
                let exact: Vec<Rational> = cramer_solve(&build_a(m, n, &delta), &vec![Rational::from_integer(1.into()); n]).unwrap();
                let form = universal.form(&dist, m, n);
                for (f, x) in form.lambda.iter().zip(&exact) {
                    let x = x.to_f64().unwrap();
                    assert!((f - x).abs() <= 1e-12 * x.abs().max(1.0), "m={m} n={n} delta={delta_text}: {f} vs {x}");
                }
            }
        }
    }
}

#[test]
fn bounds_match_their_spectral_residual() {
    for c in common::CATALOG {
        let (d, g) = (c.distribution(), c.function());
        let e = Engine::new(&d, &g, c.m + c.n, &settings()).unwrap();
        let report = e.bound_smn(c.m, c.n).unwrap();
        let k_max = c.m + c.n + 24;
        let spectrum = fourier_coefficients(&d, &g, k_max, &settings()).unwrap();
        let delta = d.delta();
        let tail: f64 = (c.m + c.n + 1..=k_max)
            .map(|k| residual_coefficient(k, c.m, c.n, &delta) * spectrum.coefficients()[k].powi(2))
            .sum();
        let residual = report.residual.unwrap();
        assert!(residual >= 0.0 || residual.abs() < 1e-9, "{}", c.label());
        assert!((residual - tail).abs() < 1e-7 * report.scale(), "{}: {residual} vs {tail}", c.label());
    }
}

#[test]
fn universal_with_n_zero_is_bessel() {
    let d = PearsonDistribution::gamma(3.0, 2.0).unwrap();
    let g = parse("x*exp(-x)").unwrap();
    let e = Engine::new(&d, &g, 4, &settings()).unwrap();
    let bessel = lookup("bessel").unwrap();
    for m in 1..=4 {
        let (u, b) = (e.bound_smn(m, 0).unwrap(), e.bound(bessel, 0, m).unwrap());
        let (u, b) = (u.bound.finite().unwrap(), b.bound.finite().unwrap());
        assert!((u - b).abs() < 1e-12 * u.abs().max(1.0), "m={m}: {u} vs {b}");
    }
}

#[test]
fn sweep_equals_sequential_evaluation() {
    let d = PearsonDistribution::beta(2.0, 3.0).unwrap();
    let g = parse("sin(3*x)").unwrap();
    let e = Engine::new(&d, &g, 5, &settings()).unwrap();
    for s in registry() {
        let Ok(rows) = e.sweep(*s, 4, 1..=1) else { continue };
        for r in &rows {
            assert_eq!(r, &e.bound(*s, r.m, r.n).unwrap());
        }
    }
    let rows = e.sweep(lookup("universal").unwrap(), 3, 1..=2).unwrap();
    let cells: Vec<(usize, usize)> = rows.iter().map(|r| (r.m, r.n)).collect();
    assert_eq!(cells, vec![(0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2)]);
}

#[test]
fn summation_modes_agree() {
    let d = PearsonDistribution::normal(1.0, 2.0).unwrap();
    let g = parse("exp(x/2)").unwrap();
    let plain = Settings { summation: Summation::Plain, ..Settings::default() };
    let comp = Settings { summation: Summation::Compensated, ..Settings::default() };
    let a = Engine::new(&d, &g, 4, &plain).unwrap().bound_smn(2, 2).unwrap();
    let b = Engine::new(&d, &g, 4, &comp).unwrap().bound_smn(2, 2).unwrap();
    let (a, b) = (a.bound.finite().unwrap(), b.bound.finite().unwrap());
    assert!((a - b).abs() < 1e-12 * a.abs());
}

fn family() -> impl Strategy<Value = PearsonDistribution> {
    prop_oneof![
        (-1.0..1.0f64, 0.3..2.0f64).prop_map(|(mu, s2)| PearsonDistribution::normal(mu, s2).unwrap()),
        (1.0..5.0f64, 1.0..4.0f64).prop_map(|(a, r)| PearsonDistribution::gamma(a, r).unwrap()),
        (1.0..5.0f64, 1.0..5.0f64).prop_map(|(a, b)| PearsonDistribution::beta(a, b).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn residual_sign_holds(d in family(), a in 0.2..0.9f64, f in 0usize..3, m in 0usize..3, n in 1usize..3) {
        let text = match f {
            0 => format!("exp({a}*x)"),
            1 => format!("sin({a}*x)"),
            _ => format!("cos({a}*x)"),
        };
        let g = parse(&text).unwrap();
        let e = Engine::new(&d, &g, m + n, &settings()).unwrap();
        let r = e.bound_smn(m, n).unwrap();
        prop_assert!(r.sign_ok, "{} {} m={} n={}: residual {:?}", d, text, m, n, r.residual);
    }
}
