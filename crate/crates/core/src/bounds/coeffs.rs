//! Closed-form coefficients of the universal bounds.
//!
//! Everything here is generic over [`Field`] so the same formulas run in
//! `f64` for the numeric engine and in `BigRational` for exact checking.
//! Empty products are one and empty sums are zero throughout.

use crate::scalar::Field;

/// Falling factorial `(x)_k = x(x-1)...(x-k+1)`, with `(x)_0 = 1`.
pub fn falling<T: Field>(x: &T, k: usize) -> T {
    let mut acc = T::one();
    for j in 0..k {
        acc = acc * (x.clone() - T::int(j as i64));
    }
    acc
}

/// Rising factorial `[x]_k = x(x+1)...(x+k-1)`, with `[x]_0 = 1`.
pub fn rising<T: Field>(x: &T, k: usize) -> T {
    let mut acc = T::one();
    for j in 0..k {
        acc = acc * (x.clone() + T::int(j as i64));
    }
    acc
}

pub fn factorial<T: Field>(k: usize) -> T {
    falling(&T::int(k as i64), k)
}

pub fn binomial<T: Field>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    falling(&T::int(n as i64), k) / factorial::<T>(k)
}

/// `prod_{j=lo}^{hi} (1 - j*delta)`; one when `hi < lo`.
pub fn prod_one_minus<T: Field>(lo: i64, hi: i64, delta: &T) -> T {
    let mut acc = T::one();
    let mut j = lo;
    while j <= hi {
        acc = acc * (T::one() - T::int(j) * delta.clone());
        j += 1;
    }
    acc
}

fn sign<T: Field>(i: usize) -> T {
    if i % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Multiplier of `c_k^2` in `E q^i(X) (g^(i)(X))^2 = sum_k pi_{k;i} c_k^2`:
/// `(k)_i prod_{j=k-1}^{k+i-2} (1 - j delta)`.
pub fn pi_coefficient<T: Field>(k: usize, i: usize, delta: &T) -> T {
    let k_ = k as i64;
    falling(&T::int(k_), i) * prod_one_minus(k_ - 1, k_ + i as i64 - 2, delta)
}

/// `k! prod_{j=k-1}^{2k-2} (1 - j delta)`: the Rodrigues norm divided by
/// `E q^k(X)`.
pub fn rodrigues_factor<T: Field>(k: usize, delta: &T) -> T {
    let k_ = k as i64;
    factorial::<T>(k) * prod_one_minus(k_ - 1, 2 * k_ - 2, delta)
}

/// Solution of `A_{m,n} lambda = 1`:
/// `lambda_i = (-1)^{i-1} C(n,i) / [(m+n)_i prod_{j=m}^{m+i-1}(1 - j delta)]`.
pub fn lambda_solution<T: Field>(m: usize, n: usize, delta: &T) -> Vec<T> {
    (1..=n)
        .map(|i| sign::<T>(i - 1) * b_coefficient(i, m, n, delta))
        .collect()
}

/// Absolute value of `lambda_i`; the weight of `E q^i (g^(i))^2` in the bound.
pub fn b_coefficient<T: Field>(i: usize, m: usize, n: usize, delta: &T) -> T {
    let m_ = m as i64;
    binomial::<T>(n, i)
        / (falling(&T::int((m + n) as i64), i) * prod_one_minus(m_, m_ + i as i64 - 1, delta))
}

/// Weight of `E^2 q^i g^(i)` in the bound, given `E q^i(X)`.
pub fn a_coefficient<T: Field>(i: usize, m: usize, n: usize, delta: &T, q_moment: &T) -> T {
    let (m_, n_, i_) = (m as i64, n as i64, i as i64);
    let num = binomial::<T>(m, i) * prod_one_minus(m_ + i_, m_ + n_ + i_ - 1, delta);
    let den = falling(&T::int(m_ + n_), i)
        * q_moment.clone()
        * prod_one_minus(i_ - 1, 2 * i_ - 2, delta)
        * prod_one_minus(m_, m_ + n_ - 1, delta);
    num / den
}

/// `(m+n)_n prod_{j=m}^{m+n-1}(1 - j delta)`, the common denominator of the
/// residual weights.
fn residual_scale<T: Field>(m: usize, n: usize, delta: &T) -> T {
    let m_ = m as i64;
    falling(&T::int(m_ + n as i64), n) * prod_one_minus(m_, m_ + n as i64 - 1, delta)
}

/// `rho_{k;m,n}` as the finite sum over the closed-form `lambda`.
pub fn rho_from_lambda<T: Field>(k: usize, m: usize, n: usize, delta: &T) -> T {
    rho_from_solution(k, &lambda_solution(m, n, delta), delta)
}

/// `sum_i lambda_i pi_{k;i}` for any given solution vector.
pub fn rho_from_solution<T: Field>(k: usize, lambda: &[T], delta: &T) -> T {
    let mut acc = T::zero();
    for (i, l) in lambda.iter().enumerate().take(k) {
        acc = acc + l.clone() * pi_coefficient(k, i + 1, delta);
    }
    acc
}

/// `rho_{k;m,n}` by the three-branch closed form.
pub fn rho<T: Field>(k: usize, m: usize, n: usize, delta: &T) -> T {
    assert!(k >= 1 && n >= 1, "rho needs k >= 1 and n >= 1");
    let (k_, m_, n_) = (k as i64, m as i64, n as i64);
    if k <= m {
        let num = falling(&T::int(m_ + n_ - k_), n) * prod_one_minus(m_ + k_, m_ + n_ + k_ - 1, delta);
        T::one() - num / residual_scale(m, n, delta)
    } else if k <= m + n {
        T::one()
    } else {
        T::one() + sign::<T>(n - 1) * residual_coefficient(k, m, n, delta)
    }
}

/// Residual weight `r_{k;m,n}` for `k > m+n`.
pub fn residual_coefficient<T: Field>(k: usize, m: usize, n: usize, delta: &T) -> T {
    assert!(k > m + n, "residual weights exist only for k > m+n");
    let (k_, m_, n_) = (k as i64, m as i64, n as i64);
    falling(&T::int(k_ - m_ - 1), n) * prod_one_minus(m_ + k_, m_ + n_ + k_ - 1, delta)
        / residual_scale(m, n, delta)
}

/// Improvement factor `zeta_{m1,m2,n}(delta)` between balance points.
pub fn zeta<T: Field>(m1: usize, m2: usize, n: usize, delta: &T) -> T {
    assert!(m1 < m2, "zeta needs m1 < m2");
    residual_scale(m2, n, delta) / residual_scale(m1, n, delta)
}

/// Factor by which `S_{n,n}` improves on the legacy `S_n`:
/// `C(2n,n) prod_{j=n}^{2n-1}(1-j delta) / prod_{j=0}^{n-1}(1-j delta)`.
pub fn corollary_factor<T: Field>(n: usize, delta: &T) -> T {
    let n_ = n as i64;
    binomial::<T>(2 * n, n) * prod_one_minus(n_, 2 * n_ - 1, delta) / prod_one_minus(0, n_ - 1, delta)
}

/// Residual cap multiplier `u_{m,n,tau}`.
pub fn residual_cap_factor<T: Field>(m: usize, n: usize, tau: usize, delta: &T) -> T {
    let (m_, n_, t_) = (m as i64, n as i64, tau as i64);
    prod_one_minus(2 * m_ + n_ + 1, 2 * m_ + 2 * n_, delta)
        / (binomial::<T>(m + n, n)
            * falling(&T::int(m_ + n_ + 1), tau)
            * prod_one_minus(m_, m_ + n_ + t_ - 1, delta))
}

/// Left side of the terminating hypergeometric sum
/// `sum_{i=0}^n (-1)^i C(n,i) (k)_i/(m+n)_i prod_{k-1}^{k+i-2} / prod_{m}^{m+i-1}`,
/// accumulated through the ratio of consecutive terms.
pub fn hypergeometric_lhs<T: Field>(m: usize, n: usize, k: usize, delta: &T) -> T {
    let (k_, m_, n_) = (k as i64, m as i64, n as i64);
    let mut term = T::one();
    let mut acc = T::one();
    for i in 0..n_ {
        let num = T::int(n_ - i) * T::int(k_ - i) * (T::one() - T::int(k_ + i - 1) * delta.clone());
        let den = T::int(i + 1) * T::int(m_ + n_ - i) * (T::one() - T::int(m_ + i) * delta.clone());
        term = -(term * num / den);
        acc = acc + term.clone();
    }
    acc
}

/// Right side of the same sum in product form.
pub fn hypergeometric_rhs<T: Field>(m: usize, n: usize, k: usize, delta: &T) -> T {
    let (k_, m_, n_) = (k as i64, m as i64, n as i64);
    falling(&T::int(m_ + n_ - k_), n) * prod_one_minus(m_ + k_, m_ + n_ + k_ - 1, delta)
        / residual_scale(m, n, delta)
}

/// Floating-point coefficients for large `m+n`, accumulated in log space.
pub mod logspace {
    /// `ln prod_{j=lo}^{hi} (1 - j delta)`; every factor is positive for
    /// `delta <= 0` and `j >= 0`.
    pub fn ln_prod_one_minus(lo: i64, hi: i64, delta: f64) -> f64 {
        (lo..=hi).map(|j| (1.0 - j as f64 * delta).ln()).sum()
    }

    /// `ln (x)_k` for `x >= k - 1`, i.e. when every factor is positive.
    pub fn ln_falling(x: f64, k: usize) -> f64 {
        (0..k).map(|j| (x - j as f64).ln()).sum()
    }

    pub fn ln_binomial(n: usize, k: usize) -> f64 {
        ln_falling(n as f64, k) - ln_falling(k as f64, k)
    }

    pub fn b_coefficient(i: usize, m: usize, n: usize, delta: f64) -> f64 {
        let m_ = m as i64;
        (ln_binomial(n, i) - ln_falling((m + n) as f64, i) - ln_prod_one_minus(m_, m_ + i as i64 - 1, delta))
            .exp()
    }

    pub fn a_coefficient(i: usize, m: usize, n: usize, delta: f64, q_moment: f64) -> f64 {
        let (m_, n_, i_) = (m as i64, n as i64, i as i64);
        let ln_num = ln_binomial(m, i) + ln_prod_one_minus(m_ + i_, m_ + n_ + i_ - 1, delta);
        let ln_den = ln_falling((m + n) as f64, i)
            + q_moment.ln()
            + ln_prod_one_minus(i_ - 1, 2 * i_ - 2, delta)
            + ln_prod_one_minus(m_, m_ + n_ - 1, delta);
        (ln_num - ln_den).exp()
    }
}

/// Above this `m+n` the float coefficients switch to log-space products.
pub const LOG_SPACE_THRESHOLD: usize = 12;

/// `a_i` in `f64`, choosing the log-space path for large orders.
pub fn a_coefficient_f64(i: usize, m: usize, n: usize, delta: f64, q_moment: f64) -> f64 {
    if m + n > LOG_SPACE_THRESHOLD {
        logspace::a_coefficient(i, m, n, delta, q_moment)
    } else {
        a_coefficient(i, m, n, &delta, &q_moment)
    }
}

/// `b_i` in `f64`, choosing the log-space path for large orders.
pub fn b_coefficient_f64(i: usize, m: usize, n: usize, delta: f64) -> f64 {
    if m + n > LOG_SPACE_THRESHOLD {
        logspace::b_coefficient(i, m, n, delta)
    } else {
        b_coefficient(i, m, n, &delta)
    }
}
