use rayon::prelude::*;
use serde::Serialize;

use crate::funcspace::{Expr, Finiteness, MembershipProbe, MembershipReport, Verdict};
use crate::pearson::PearsonDistribution;

use super::coeffs::{corollary_factor, residual_cap_factor, zeta};
use super::moments::DerivativeMoments;
use super::report::{tolerance_scale, BoundReport, BoundValue, ResidualCap};
use super::strategy::{BoundStrategy, Universal};
use super::{BoundsError, Settings};

/// Tolerance for the Chernoff comparisons.
pub const CHERNOFF_TOL: f64 = 1e-8;

/// Everything needed to evaluate bounds of order up to `order` for one
/// `(X, g)` pair: the membership probe and the derivative moments.
#[derive(Debug, Clone)]
pub struct Engine {
    dist: PearsonDistribution,
    settings: Settings,
    probe: MembershipProbe,
    moments: DerivativeMoments,
}

impl Engine {
    pub fn new(dist: &PearsonDistribution, g: &Expr, order: usize, settings: &Settings) -> Result<Self, BoundsError> {
        let probe = MembershipProbe::run(dist, g, order)?;
        let moments = DerivativeMoments::compute(dist, g, order, settings)?;
        Ok(Engine { dist: dist.clone(), settings: *settings, probe, moments })
    }

    pub fn order(&self) -> usize {
        self.moments.order()
    }

    pub fn distribution(&self) -> &PearsonDistribution {
        &self.dist
    }

    pub fn moments(&self) -> &DerivativeMoments {
        &self.moments
    }

    /// `Var g(X)`, or `None` if `E g^2` diverges.
    pub fn variance(&self) -> Option<f64> {
        let v = self.moments.variance();
        (self.probe.quadratic()[0] != Finiteness::Divergent && v.is_finite()).then_some(v)
    }

    pub fn membership(&self, m: usize, n: usize) -> Result<MembershipReport, BoundsError> {
        self.check_order(m.max(n))?;
        Ok(self.probe.report(m, n))
    }

    fn check_order(&self, needed: usize) -> Result<(), BoundsError> {
        if needed > self.order() {
            Err(BoundsError::InvalidOrder(format!(
                "order {needed} requested from an engine prepared for order {}",
                self.order()
            )))
        } else {
            Ok(())
        }
    }

    pub fn bound(&self, strategy: &dyn BoundStrategy, m: usize, n: usize) -> Result<BoundReport, BoundsError> {
        strategy.validate(m, n)?;
        let (mc, nc) = strategy.required_class(m, n);
        let membership = self.membership(mc, nc)?;
        let direction = strategy.direction(m, n);
        let form = strategy.form(&self.dist, m, n);
        let variance = self.variance();
        let mut report = BoundReport {
            kind: strategy.name(),
            m,
            n,
            direction,
            bound: direction.trivial(),
            variance,
            residual: None,
            sign_ok: true,
            equality: false,
            b: form.lambda.iter().map(|l| l.abs()).collect(),
            a: form.a.clone(),
            lambda: form.lambda.clone(),
            membership: membership.verdict,
            cap: None,
            diagnostic: membership.diagnostic.clone(),
        };
        if membership.verdict == Verdict::TrivialBound {
            return Ok(report);
        }
        let value = self.settings.summation.sum(form.terms(self.moments.linear(), self.moments.quadratic()));
        let var = match variance {
            Some(v) if value.is_finite() => v,
            _ => {
                report.membership = Verdict::TrivialBound;
                report.diagnostic = Some("the bound or the variance evaluated to a non-finite value".into());
                return Ok(report);
            }
        };
        let scale = tolerance_scale(var);
        let residual = direction.sign() * (var - value);
        report.bound = BoundValue::Finite(value);
        report.residual = Some(residual);
        let tol = self.settings.sign_tol() * scale;
        report.sign_ok = residual >= -tol;
        report.equality = residual.abs() <= tol;
        if membership.verdict == Verdict::Unknown {
            report.diagnostic = membership.diagnostic.map(|d| format!("membership unconfirmed: {d}"));
        }
        Ok(report)
    }

    /// `S_{m,n}(g)`.
    pub fn bound_smn(&self, m: usize, n: usize) -> Result<BoundReport, BoundsError> {
        self.bound(&Universal, m, n)
    }

    /// `u_{m,n,tau} E q^tau (g^(tau))^2`, an upper bound on `R_{m,n}(g)`.
    pub fn residual_cap(&self, m: usize, n: usize, tau: usize) -> Result<ResidualCap, BoundsError> {
        if tau < n || tau > m + n + 1 {
            return Err(BoundsError::InvalidOrder(format!("tau must lie in [{n}, {}], got {tau}", m + n + 1)));
        }
        let membership = self.membership(tau, tau)?;
        if membership.verdict != Verdict::Member {
            return Err(BoundsError::MembershipFailure(
                membership.diagnostic.unwrap_or_else(|| format!("g is not in H^({tau},{tau})")),
            ));
        }
        let factor = residual_cap_factor(m, n, tau, &self.dist.delta());
        let moment = self.moments.quadratic()[tau];
        Ok(ResidualCap { tau, factor, moment, cap: factor * moment })
    }

    /// Universal bound with its residual cap attached.
    pub fn bound_with_cap(&self, m: usize, n: usize, tau: usize) -> Result<BoundReport, BoundsError> {
        let mut report = self.bound_smn(m, n)?;
        if !report.is_trivial() {
            report.cap = Some(self.residual_cap(m, n, tau)?);
        }
        Ok(report)
    }

    /// Reports for every `(m, n)` in `0..=m_max x n_min..=n_max`, in row-major
    /// order. Rows are evaluated in parallel.
    pub fn sweep(
        &self,
        strategy: &dyn BoundStrategy,
        m_max: usize,
        n_range: std::ops::RangeInclusive<usize>,
    ) -> Result<Vec<BoundReport>, BoundsError> {
        let cells: Vec<(usize, usize)> =
            (0..=m_max).flat_map(|m| n_range.clone().map(move |n| (m, n))).collect();
        cells.par_iter().map(|&(m, n)| self.bound(strategy, m, n)).collect()
    }

    /// Comparison of the universal bounds of order `n` for `m = 0..=m_max`
    /// against each other and against the legacy bounds.
    pub fn compare(&self, n: usize, m_max: usize) -> Result<Comparison, BoundsError> {
        if n == 0 {
            return Err(BoundsError::InvalidOrder("comparisons need n >= 1".into()));
        }
        let rows = (0..=m_max).map(|m| self.bound_smn(m, n)).collect::<Result<Vec<_>, _>>()?;
        let variance = self
            .variance()
            .ok_or_else(|| BoundsError::Divergent("Var g(X) is infinite".into()))?;
        let scale = tolerance_scale(variance);
        let tol = self.settings.sign_tol() * scale;
        let delta = self.dist.delta();
        let gap = |r: &BoundReport| {
            r.gap().ok_or_else(|| BoundsError::Divergent(format!("S_({},{}) is trivial", r.m, r.n)))
        };
        let mut zeta_checks = Vec::new();
        for m1 in 0..=m_max {
            for m2 in m1 + 1..=m_max {
                let factor = zeta(m1, m2, n, &delta);
                zeta_checks.push(FactorCheck::new(m1, m2, factor, gap(&rows[m1])?, gap(&rows[m2])?, tol));
            }
        }
        let snn = self.bound_smn(n, n)?;
        let corollary = FactorCheck::new(0, n, corollary_factor(n, &delta), gap(&rows[0])?, gap(&snn)?, tol);
        let strong = super::strategy::ChernoffStrong;
        let weak = super::strategy::ChernoffWeak;
        let ctol = self.settings.chernoff_tol() * scale;
        let chernoff_strong = ChernoffCheck::new(&self.bound_smn(n, 1)?, &self.bound(&strong, n, n)?, ctol)?;
        let chernoff_weak = ChernoffCheck::new(&self.bound_smn(n - 1, 1)?, &self.bound(&weak, n, n)?, ctol)?;
        Ok(Comparison { n, variance, rows, zeta_checks, corollary, chernoff_strong, chernoff_weak })
    }
}

/// `|Var - S_{m1,n}| >= factor |Var - S_{m2,n}|`, up to tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorCheck {
    pub m1: usize,
    pub m2: usize,
    pub factor: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl FactorCheck {
    fn new(m1: usize, m2: usize, factor: f64, gap1: f64, gap2: f64, tol: f64) -> Self {
        let rhs = factor * gap2;
        FactorCheck { m1, m2, factor, lhs: gap1, rhs, holds: gap1 >= rhs - tol }
    }
}

/// A universal upper bound against a legacy one it should never exceed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChernoffCheck {
    pub universal: f64,
    pub legacy: f64,
    pub holds: bool,
}

impl ChernoffCheck {
    fn new(universal: &BoundReport, legacy: &BoundReport, tol: f64) -> Result<Self, BoundsError> {
        let (Some(u), Some(l)) = (universal.bound.finite(), legacy.bound.finite()) else {
            return Err(BoundsError::Divergent("a compared bound is trivial".into()));
        };
        Ok(ChernoffCheck { universal: u, legacy: l, holds: u <= l + tol })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub n: usize,
    pub variance: f64,
    /// `S_{m,n}` for `m = 0..=m_max`.
    pub rows: Vec<BoundReport>,
    pub zeta_checks: Vec<FactorCheck>,
    /// `S_{0,n}` against `S_{n,n}` with the closed-form improvement factor.
    pub corollary: FactorCheck,
    /// `S_{n,1} <= S_{n,(str)}`.
    pub chernoff_strong: ChernoffCheck,
    /// `S_{n-1,1} <= S_{n,(weak)}`.
    pub chernoff_weak: ChernoffCheck,
}

impl Comparison {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.sign_ok)
            && self.zeta_checks.iter().all(|c| c.holds)
            && self.corollary.holds
            && self.chernoff_strong.holds
            && self.chernoff_weak.holds
    }
}
