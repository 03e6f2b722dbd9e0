//! Plain or compensated accumulation of quadrature sums.

use std::env;

/// Environment variable that toggles compensated accumulation.
pub const PRECISION_ENV: &str = "VARBOUND_PRECISION";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Summation {
    Plain,
    /// Neumaier's compensated summation.
    #[default]
    Compensated,
}

impl Summation {
    /// Reads [`PRECISION_ENV`]: `off`, `0`, `plain` or `standard` select plain
    /// sums, anything else (or unset) keeps compensation on.
    pub fn from_env() -> Self {
        match env::var(PRECISION_ENV) {
            Ok(v) => Self::from_setting(&v),
            Err(_) => Self::default(),
        }
    }

    pub fn from_setting(value: &str) -> Self {
        match value.trim().to_ascii_lowercase().as_str() {
            "off" | "0" | "plain" | "standard" | "false" => Summation::Plain,
            _ => Summation::Compensated,
        }
    }

    pub fn sum<I: IntoIterator<Item = f64>>(self, terms: I) -> f64 {
        match self {
            Summation::Plain => terms.into_iter().sum(),
            Summation::Compensated => {
                let mut acc = Accumulator::default();
                for t in terms {
                    acc.add(t);
                }
                acc.value()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_cancelled_terms() {
        let terms = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(Summation::Compensated.sum(terms), 2.0);
        assert_ne!(Summation::Plain.sum(terms), 2.0);
    }

    #[test]
    fn settings() {
        assert_eq!(Summation::from_setting("off"), Summation::Plain);
        assert_eq!(Summation::from_setting("OFF"), Summation::Plain);
        assert_eq!(Summation::from_setting("extended"), Summation::Compensated);
        assert_eq!(Summation::from_setting("on"), Summation::Compensated);
    }
}
