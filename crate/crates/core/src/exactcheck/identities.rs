//! Exact forms of the linear system defining `lambda_{m,n}`, its
//! determinants, and the terminating hypergeometric identity.

use num::{One, Zero};
use rayon::prelude::*;

use crate::bounds::coeffs::{
    factorial, falling, hypergeometric_lhs, hypergeometric_rhs, lambda_solution, prod_one_minus, rho, rho_from_solution,
};

use super::matrix::{ExactMatrix, Rational};

/// `A_{m,n}` with `a_{r,c} = (m+r)_c prod_{j=m+r-1}^{m+r+c-2} (1 - j delta)`,
/// `r, c = 1..=n`.
pub fn build_a(m: usize, n: usize, delta: &Rational) -> ExactMatrix {
    assert!(n >= 1, "A_(m,n) needs n >= 1");
    ExactMatrix::from_fn(n, |r, c| {
        let (r, c) = ((r + 1) as i64, c + 1);
        let mr = m as i64 + r;
        falling(&Rational::from_integer(mr.into()), c) * prod_one_minus(mr - 1, mr + c as i64 - 2, delta)
    })
    .unwrap()
}

/// `B_{m,n}(t)`, of dimension `n - t + 1`.
pub fn build_b(m: usize, n: usize, t: usize, delta: &Rational) -> ExactMatrix {
    let (m_, t_) = (m as i64, t as i64);
    ExactMatrix::from_fn(n - t + 1, |r, c| {
        let (r, c) = ((r + 1) as i64, (c + 1) as i64);
        falling(&Rational::from_integer((m_ + r - 1).into()), (c - 1) as usize)
            * prod_one_minus(m_ + r + t_ - 1, m_ + r + c + t_ - 3, delta)
    })
    .unwrap()
}

/// `B_{i,m,n}(t)`, of dimension `n - t + 1`. For `t = 1` this is
/// `A_{i;m,n}` with its ones column moved to the front, so the first
/// `i - t + 1` columns carry `(m+r)_{c-1}` and the rest `(m+r)_c`.
pub fn build_b_i(i: usize, m: usize, n: usize, t: usize, delta: &Rational) -> ExactMatrix {
    let (i_, m_, t_) = (i as i64, m as i64, t as i64);
    ExactMatrix::from_fn(n - t + 1, |r, c| {
        let (r, c) = ((r + 1) as i64, (c + 1) as i64);
        let base = Rational::from_integer((m_ + r).into());
        if c <= i_ - t_ + 1 {
            falling(&base, (c - 1) as usize) * prod_one_minus(m_ + r + t_ - 2, m_ + r + c + t_ - 4, delta)
        } else {
            falling(&base, c as usize) * prod_one_minus(m_ + r + t_ - 2, m_ + r + c + t_ - 3, delta)
        }
    })
    .unwrap()
}

fn ones(n: usize) -> Vec<Rational> {
    vec![Rational::one(); n]
}

/// `prod_{t=1}^{n-1} prod_{j=m+1}^{m+n-t} (1 - (2j + t - 1) delta)`.
fn staircase(m: usize, n: usize, delta: &Rational) -> Rational {
    let mut acc = Rational::one();
    for t in 1..n as i64 {
        for j in m as i64 + 1..=m as i64 + n as i64 - t {
            acc *= Rational::one() - Rational::from_integer((2 * j + t - 1).into()) * delta;
        }
    }
    acc
}

fn superfactorial(n: usize) -> Rational {
    (0..=n).map(factorial::<Rational>).fold(Rational::one(), |a, b| a * b)
}

/// Closed forms of `det A_{m,n}` and of `det A_{i;m,n}` (column `i`
/// replaced by ones), `i = 1..=n`.
pub fn det_closed_forms(m: usize, n: usize, delta: &Rational) -> (Rational, Vec<Rational>) {
    let (m_, n_) = (m as i64, n as i64);
    let stairs = staircase(m, n, delta);
    let d = falling(&Rational::from_integer((m_ + n_).into()), n)
        * superfactorial(n - 1)
        * prod_one_minus(m_, m_ + n_ - 1, delta)
        * &stairs;
    let di = (1..=n)
        .map(|i| {
            let sign = if i % 2 == 1 { Rational::one() } else { -Rational::one() };
            sign * falling(&Rational::from_integer((m_ + n_ - i as i64).into()), n - i)
                / (factorial::<Rational>(i) * factorial::<Rational>(n - i))
                * superfactorial(n)
                * prod_one_minus(m_ + i as i64, m_ + n_ - 1, delta)
                * &stairs
        })
        .collect();
    (d, di)
}

/// Does the terminating hypergeometric sum equal its closed product?
pub fn hypergeometric_identity(m: usize, n: usize, k: usize, delta: &Rational) -> bool {
    hypergeometric_lhs(m, n, k, delta) == hypergeometric_rhs(m, n, k, delta)
}

/// One exact check and its outcome.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CheckRow {
    pub identity: &'static str,
    pub m: usize,
    pub n: usize,
    pub k: Option<usize>,
    pub delta: String,
    pub holds: bool,
}

/// Grid for [`verify`]: `m in 0..=max_m`, `n in 1..=max_n`, `k in 0..=max_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub max_m: usize,
    pub max_n: usize,
    pub max_k: usize,
    pub deltas: Vec<Rational>,
}

fn row(identity: &'static str, m: usize, n: usize, k: Option<usize>, delta: &Rational, holds: bool) -> CheckRow {
    CheckRow { identity, m, n, k, delta: delta.to_string(), holds }
}

/// Checks of the system solution and its determinants for one `(m, n, delta)`.
pub fn verify_system(m: usize, n: usize, delta: &Rational) -> Vec<CheckRow> {
    let a = build_a(m, n, delta);
    let closed = lambda_solution(m, n, delta);
    let mut out = Vec::new();
    let cramer = super::matrix::cramer_solve(&a, &ones(n));
    out.push(row("cramer", m, n, None, delta, cramer.as_ref() == Ok(&closed)));
    let product: Vec<Rational> = (0..n)
        .map(|r| (0..n).fold(Rational::zero(), |acc, c| acc + a.get(r, c) * &closed[c]))
        .collect();
    out.push(row("system", m, n, None, delta, product == ones(n)));
    let (d, di) = det_closed_forms(m, n, delta);
    out.push(row("determinant", m, n, None, delta, a.determinant() == d));
    let replaced = (0..n).all(|i| a.with_column(i, &ones(n)).determinant() == di[i]);
    out.push(row("column-determinants", m, n, None, delta, replaced));
    let reduction = {
        let top = falling(&Rational::from_integer(((m + n) as i64).into()), n)
            * prod_one_minus(m as i64, (m + n) as i64 - 1, delta)
            * build_b(m, n, 1, delta).determinant();
        let chain = (1..n).all(|t| {
            let lhs = build_b(m, n, t, delta).determinant();
            let f = factorial::<Rational>(n - t)
                * (m as i64 + 1..=(m + n - t) as i64)
                    .map(|j| Rational::one() - Rational::from_integer((2 * j + t as i64 - 1).into()) * delta)
                    .fold(Rational::one(), |a, b| a * b);
            lhs == f * build_b(m, n, t + 1, delta).determinant()
        });
        top == d && chain
    };
    out.push(row("reduction", m, n, None, delta, reduction));
    let moved = (1..=n).all(|i| {
        let sign = if i % 2 == 1 { Rational::one() } else { -Rational::one() };
        sign * build_b_i(i, m, n, 1, delta).determinant() == di[i - 1]
    });
    out.push(row("column-reduction", m, n, None, delta, moved));
    out
}

/// `rho` from the system solved by Cramér's rule against its piecewise
/// closed form, for `k = 1..=max_k`.
pub fn verify_rho(m: usize, n: usize, max_k: usize, delta: &Rational) -> CheckRow {
    let holds = match super::matrix::cramer_solve(&build_a(m, n, delta), &ones(n)) {
        Ok(lambda) => (1..=max_k).all(|k| rho_from_solution(k, &lambda, delta) == rho(k, m, n, delta)),
        Err(_) => false,
    };
    row("rho", m, n, Some(max_k), delta, holds)
}

/// The full exact suite over a grid. Cells run in parallel; rows come back
/// in `(delta, m, n)` order.
pub fn verify(grid: &Grid) -> Vec<CheckRow> {
    let cells: Vec<(&Rational, usize, usize)> = grid
        .deltas
        .iter()
        .flat_map(|d| (0..=grid.max_m).flat_map(move |m| (1..=grid.max_n).map(move |n| (d, m, n))))
        .collect();
    cells
        .par_iter()
        .map(|&(delta, m, n)| {
            let mut out = verify_system(m, n, delta);
            for k in 0..=grid.max_k {
                out.push(row("hypergeometric", m, n, Some(k), delta, hypergeometric_identity(m, n, k, delta)));
            }
            out.push(verify_rho(m, n, grid.max_k, delta));
            out
        })
        .flatten()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn q(text: &str) -> Rational {
        parse_rational(text).unwrap()
    }

    fn ints(m: &ExactMatrix) -> Vec<Vec<String>> {
        m.rows().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect()
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(ints(&build_a(0, 2, &q("0"))), vec![vec!["1", "0"], vec!["2", "2"]]);
        assert_eq!(ints(&build_a(1, 1, &q("0"))), vec![vec!["2"]]);
        assert_eq!(ints(&build_a(0, 1, &q("-1"))), vec![vec!["1"]]);
    }

    #[test]
    fn solution_examples() {
        let a = build_a(0, 2, &q("0"));
        assert_eq!(super::super::cramer_solve(&a, &ones(2)).unwrap(), vec![q("1"), q("-1/2")]);
        for m in 0..5 {
            let a = build_a(m, 1, &q("0"));
            assert_eq!(super::super::cramer_solve(&a, &ones(1)).unwrap(), vec![q(&format!("1/{}", m + 1))]);
        }
        let d = q("-1/4");
        assert_eq!(super::super::cramer_solve(&build_a(1, 2, &d), &ones(2)).unwrap(), lambda_solution(1, 2, &d));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_closed_forms(0, 1, &q("0")).0, q("1"));
        let (d, di) = det_closed_forms(0, 2, &q("0"));
        assert_eq!(d, q("2"));
        assert_eq!(&di[0] / &d, q("1"));
    }

    #[test]
    fn hypergeometric_examples() {
        assert!(hypergeometric_identity(2, 1, 1, &q("0")));
        assert_eq!(hypergeometric_lhs(2, 1, 1, &q("0")), q("2/3"));
        for (m, n) in [(0, 1), (3, 4), (6, 6)] {
            assert_eq!(hypergeometric_lhs(m, n, 0, &q("-1/2")), q("1"));
            assert!(hypergeometric_identity(m, n, 0, &q("-1/2")));
        }
        assert!(hypergeometric_identity(1, 2, 3, &q("-1/2")));
    }

    #[test]
    fn every_system_check_holds_on_a_small_grid() {
        for d in ["0", "-1/3", "-2"] {
            for m in 0..4 {
                for n in 1..4 {
                    for r in verify_system(m, n, &q(d)) {
                        assert!(r.holds, "{r:?}");
                    }
                }
            }
        }
    }
}
