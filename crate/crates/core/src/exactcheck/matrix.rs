use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use super::ExactError;

pub type Rational = BigRational;

/// Square matrix of exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix {
    rows: Vec<Vec<Rational>>,
}

impl ExactMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(ExactError::Shape(format!("expected a non-empty square array, got {n} rows")));
        }
        Ok(ExactMatrix { rows })
    }

    pub fn from_fn<F: Fn(usize, usize) -> Rational>(dim: usize, f: F) -> Result<Self, ExactError> {
        Self::new((0..dim).map(|r| (0..dim).map(|c| f(r, c)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.rows[r][c]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Copy with column `c` replaced by `col`.
    pub fn with_column(&self, c: usize, col: &[Rational]) -> Self {
        let mut rows = self.rows.clone();
        for (row, v) in rows.iter_mut().zip(col) {
            row[c] = v.clone();
        }
        ExactMatrix { rows }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Each row is first
    /// scaled to integers by the lcm of its denominators.
    pub fn determinant(&self) -> Rational {
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|row| {
                let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                scale *= &l;
                row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
            })
            .collect();
        Rational::new(bareiss(&mut a), scale)
    }
}

/// Determinant of an integer matrix; `a` is overwritten.
pub fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Solution of `A x = rhs` by Cramér's rule.
pub fn cramer_solve(a: &ExactMatrix, rhs: &[Rational]) -> Result<Vec<Rational>, ExactError> {
    if rhs.len() != a.dim() {
        return Err(ExactError::Shape(format!("rhs has {} entries for dimension {}", rhs.len(), a.dim())));
    }
    let det = a.determinant();
    if det.is_zero() {
        return Err(ExactError::SingularMatrix);
    }
    Ok((0..a.dim()).map(|c| a.with_column(c, rhs).determinant() / &det).collect())
}

/// Reference determinant by Gaussian elimination over the rationals.
pub fn gaussian_determinant(m: &ExactMatrix) -> Rational {
    let mut a = m.rows.clone();
    let n = a.len();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).max_by_key(|&r| a[r][k].abs()) else { break };
        if a[p][k].is_zero() {
            return Rational::zero();
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let v = &a[k][j] * &f;
                a[i][j] -= v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn int_matrix(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::new(rows.iter().map(|row| row.iter().map(|&v| r(v, 1)).collect()).collect()).unwrap()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(int_matrix(&[&[1, 0], &[2, 2]]).determinant(), r(2, 1));
        assert_eq!(int_matrix(&[&[0, 1], &[1, 0]]).determinant(), r(-1, 1));
        assert_eq!(int_matrix(&[&[1, 2], &[2, 4]]).determinant(), r(0, 1));
        let m = ExactMatrix::new(vec![vec![r(1, 2), r(1, 3)], vec![r(1, 4), r(1, 5)]]).unwrap();
        assert_eq!(m.determinant(), r(1, 10) - r(1, 12));
        assert_eq!(m.determinant(), gaussian_determinant(&m));
    }

    #[test]
    fn cramer_examples() {
        let ones = vec![r(1, 1); 2];
        assert_eq!(cramer_solve(&int_matrix(&[&[1, 0], &[2, 2]]), &ones).unwrap(), vec![r(1, 1), r(-1, 2)]);
        assert_eq!(cramer_solve(&int_matrix(&[&[1, 2], &[2, 4]]), &ones), Err(ExactError::SingularMatrix));
    }

    #[test]
    fn shape_is_checked() {
        assert!(ExactMatrix::new(vec![]).is_err());
        assert!(ExactMatrix::new(vec![vec![r(1, 1), r(1, 1)]]).is_err());
    }
}
