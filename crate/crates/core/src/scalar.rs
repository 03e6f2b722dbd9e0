//! Field abstraction shared by the floating-point bound engine and the
//! exact rational verifier.

use std::fmt::Debug;
use std::ops::Neg;

use num::{BigInt, BigRational, Num};

/// Ordered field elements that can be built from machine integers.
pub trait Field: Num + Clone + Neg<Output = Self> + PartialOrd + Debug {
    fn int(v: i64) -> Self;
}

impl Field for f64 {
    #[inline]
    fn int(v: i64) -> Self {
        v as f64
    }
}

impl Field for BigRational {
    fn int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Parses `p`, `-p`, `p/q` or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(n) = t.parse::<BigInt>() {
        return Some(BigRational::from_integer(n));
    }
    // Finite decimal: shift the point out of the mantissa.
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = BigInt::from(10).pow(frac_part.len() as u32);
    let r = BigRational::new(digits, scale);
    Some(if neg { -r } else { r })
}

/// Parses a real number, accepting the same `p/q` fraction syntax as
/// [`parse_rational`].
pub fn parse_real(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n: f64 = num.trim().parse().ok()?;
        let d: f64 = den.trim().parse().ok()?;
        let v = n / d;
        return v.is_finite().then_some(v);
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_in_all_forms() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(parse_rational("1/2"), Some(half.clone()));
        assert_eq!(parse_rational("-1/2"), Some(-half.clone()));
        assert_eq!(parse_rational("0.5"), Some(half));
        assert_eq!(parse_rational("-0.25"), Some(BigRational::new((-1).into(), 4.into())));
        assert_eq!(parse_rational("3"), Some(BigRational::int(3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn reals_accept_fractions() {
        assert_eq!(parse_real("2/5"), Some(0.4));
        assert_eq!(parse_real("-1e-3"), Some(-1e-3));
        assert_eq!(parse_real("1/0"), None);
        assert_eq!(parse_real("nan"), None);
    }
}
