//! Integrated Pearson distributions with non-positive leading coefficient.
//!
//! A density `f` with mean `mu` belongs to the family when
//! `int_{-inf}^x (mu - t) f(t) dt = q(x) f(x)` for a quadratic
//! `q(x) = delta x^2 + beta x + gamma`. For `delta <= 0` every member is an
//! affine image `Y = c X + d` of a normal, gamma or beta variable, and under
//! that map `q_Y(y) = c^2 q_X((y - d) / c)`.

use std::f64::consts::PI;
use std::fmt;

use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::scalar::parse_real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PearsonError {
    #[error("delta = {0} > 0 is outside the supported family (moments of high order do not exist)")]
    RejectPositiveDelta(f64),
    #[error("degenerate parameters: {0}")]
    RejectDegenerate(String),
    #[error("x = {x} is outside the support {support}")]
    OutOfSupport { x: f64, support: Support },
    #[error("invalid distribution literal `{literal}`: {reason}")]
    Literal { literal: String, reason: String },
}

/// `q(x) = delta x^2 + beta x + gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub delta: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Quadratic {
    pub fn new(delta: f64, beta: f64, gamma: f64) -> Result<Self, PearsonError> {
        if delta.abs() + beta.abs() + gamma.abs() == 0.0 {
            return Err(PearsonError::RejectDegenerate("q is identically zero".into()));
        }
        Ok(Self { delta, beta, gamma })
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.delta * x + self.beta) * x + self.gamma
    }

    /// Coefficients of `c^2 q((y - d) / c)` as a quadratic in `y`.
    pub fn push_forward(&self, scale: f64, shift: f64) -> Quadratic {
        Quadratic {
            delta: self.delta,
            beta: self.beta * scale - 2.0 * self.delta * shift,
            gamma: self.delta * shift * shift - self.beta * scale * shift + self.gamma * scale * scale,
        }
    }

    pub fn scaled(&self, factor: f64) -> Quadratic {
        Quadratic { delta: self.delta * factor, beta: self.beta * factor, gamma: self.gamma * factor }
    }
}

/// Support endpoint on the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    NegInf,
    Finite(f64),
    PosInf,
}

impl Endpoint {
    pub fn value(&self) -> f64 {
        match *self {
            Endpoint::NegInf => f64::NEG_INFINITY,
            Endpoint::Finite(v) => v,
            Endpoint::PosInf => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Endpoint::Finite(_))
    }
}

/// Open support interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl Support {
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo.value() && x < self.hi.value()
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |e: &Endpoint| match e {
            Endpoint::NegInf => "-inf".to_string(),
            Endpoint::PosInf => "+inf".to_string(),
            Endpoint::Finite(v) => format!("{v}"),
        };
        write!(f, "({}, {})", show(&self.lo), show(&self.hi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Normal,
    Gamma,
    Beta,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Normal => "normal",
            FamilyKind::Gamma => "gamma",
            FamilyKind::Beta => "beta",
        })
    }
}

/// Parameters of the base variable `X` before the affine map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    /// `N(mean, variance)`.
    Normal { mean: f64, variance: f64 },
    /// Shape `alpha`, rate `theta`: density `theta^alpha x^(alpha-1) e^(-theta x) / Gamma(alpha)`.
    Gamma { shape: f64, rate: f64 },
    /// Beta on `(0, 1)`.
    Beta { alpha: f64, beta: f64 },
}

impl FamilyParams {
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilyParams::Normal { .. } => FamilyKind::Normal,
            FamilyParams::Gamma { .. } => FamilyKind::Gamma,
            FamilyParams::Beta { .. } => FamilyKind::Beta,
        }
    }

    fn mean(&self) -> f64 {
        match *self {
            FamilyParams::Normal { mean, .. } => mean,
            FamilyParams::Gamma { shape, rate } => shape / rate,
            FamilyParams::Beta { alpha, beta } => alpha / (alpha + beta),
        }
    }

    fn quadratic(&self) -> Quadratic {
        match *self {
            FamilyParams::Normal { variance, .. } => Quadratic { delta: 0.0, beta: 0.0, gamma: variance },
            FamilyParams::Gamma { rate, .. } => Quadratic { delta: 0.0, beta: 1.0 / rate, gamma: 0.0 },
            FamilyParams::Beta { alpha, beta } => {
                let s = alpha + beta;
                Quadratic { delta: -1.0 / s, beta: 1.0 / s, gamma: 0.0 }
            }
        }
    }

    fn variance(&self) -> f64 {
        match *self {
            FamilyParams::Normal { variance, .. } => variance,
            FamilyParams::Gamma { shape, rate } => shape / (rate * rate),
            FamilyParams::Beta { alpha, beta } => {
                let s = alpha + beta;
                alpha * beta / (s * s * (s + 1.0))
            }
        }
    }

    fn support(&self) -> Support {
        match self {
            FamilyParams::Normal { .. } => Support { lo: Endpoint::NegInf, hi: Endpoint::PosInf },
            FamilyParams::Gamma { .. } => Support { lo: Endpoint::Finite(0.0), hi: Endpoint::PosInf },
            FamilyParams::Beta { .. } => Support { lo: Endpoint::Finite(0.0), hi: Endpoint::Finite(1.0) },
        }
    }

    fn ln_density(&self, x: f64) -> f64 {
        match *self {
            FamilyParams::Normal { mean, variance } => {
                -0.5 * (2.0 * PI * variance).ln() - (x - mean) * (x - mean) / (2.0 * variance)
            }
            FamilyParams::Gamma { shape, rate } => {
                shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(shape)
            }
            FamilyParams::Beta { alpha, beta } => {
                ln_gamma(alpha + beta) - ln_gamma(alpha) - ln_gamma(beta)
                    + (alpha - 1.0) * x.ln()
                    + (beta - 1.0) * (1.0 - x).ln()
            }
        }
    }

    /// `E q_X^i(X)` for the base variable, in closed form.
    fn q_moment(&self, i: usize) -> f64 {
        match *self {
            FamilyParams::Normal { variance, .. } => variance.powi(i as i32),
            // [alpha]_i / theta^(2i)
            FamilyParams::Gamma { shape, rate } => {
                (0..i).map(|j| (shape + j as f64) / (rate * rate)).product()
            }
            // [a]_i [b]_i / ([a+b]_{2i} (a+b)^i), paired up to avoid overflow.
            FamilyParams::Beta { alpha, beta } => {
                let s = alpha + beta;
                (0..i)
                    .map(|j| {
                        let j = j as f64;
                        (alpha + j) * (beta + j) / ((s + 2.0 * j) * (s + 2.0 * j + 1.0) * s)
                    })
                    .product()
            }
        }
    }

    fn derived(&self, i: usize) -> FamilyParams {
        let i = i as f64;
        match *self {
            p @ FamilyParams::Normal { .. } => p,
            FamilyParams::Gamma { shape, rate } => FamilyParams::Gamma { shape: shape + i, rate },
            FamilyParams::Beta { alpha, beta } => FamilyParams::Beta { alpha: alpha + i, beta: beta + i },
        }
    }

    fn endpoint_singular(&self) -> bool {
        match *self {
            FamilyParams::Normal { .. } => false,
            FamilyParams::Gamma { shape, .. } => shape < 1.0,
            FamilyParams::Beta { alpha, beta } => alpha < 1.0 || beta < 1.0,
        }
    }
}

/// `Y = scale * X + shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub scale: f64,
    pub shift: f64,
}

impl Affine {
    pub const IDENTITY: Affine = Affine { scale: 1.0, shift: 0.0 };

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.shift
    }

    #[inline]
    pub fn invert(&self, y: f64) -> f64 {
        (y - self.shift) / self.scale
    }
}

/// An in-scope integrated Pearson distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct PearsonDistribution {
    mu: f64,
    q: Quadratic,
    params: FamilyParams,
    affine: Affine,
    support: Support,
}

impl PearsonDistribution {
    pub fn normal(mean: f64, variance: f64) -> Result<Self, PearsonError> {
        if !(variance > 0.0) || !mean.is_finite() || !variance.is_finite() {
            return Err(PearsonError::RejectDegenerate(format!("normal needs sigma2 > 0, got {variance}")));
        }
        Ok(Self::from_params(FamilyParams::Normal { mean, variance }, Affine::IDENTITY))
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self, PearsonError> {
        if !(shape > 0.0 && rate > 0.0) || !shape.is_finite() || !rate.is_finite() {
            return Err(PearsonError::RejectDegenerate(format!(
                "gamma needs alpha, theta > 0, got alpha = {shape}, theta = {rate}"
            )));
        }
        Ok(Self::from_params(FamilyParams::Gamma { shape, rate }, Affine::IDENTITY))
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self, PearsonError> {
        if !(alpha > 0.0 && beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(PearsonError::RejectDegenerate(format!(
                "beta needs alpha, beta > 0, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Ok(Self::from_params(FamilyParams::Beta { alpha, beta }, Affine::IDENTITY))
    }

    fn from_params(params: FamilyParams, affine: Affine) -> Self {
        let mu = affine.apply(params.mean());
        let q = params.quadratic().push_forward(affine.scale, affine.shift);
        let base = params.support();
        let (a, b) = (map_endpoint(base.lo, affine), map_endpoint(base.hi, affine));
        let support = if affine.scale > 0.0 { Support { lo: a, hi: b } } else { Support { lo: b, hi: a } };
        Self { mu, q, params, affine, support }
    }

    /// Pushforward of this distribution under `y = scale * x + shift`.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<Self, PearsonError> {
        if scale == 0.0 || !scale.is_finite() || !shift.is_finite() {
            return Err(PearsonError::RejectDegenerate(format!("affine scale must be finite and non-zero, got {scale}")));
        }
        let composed = Affine { scale: scale * self.affine.scale, shift: scale * self.affine.shift + shift };
        Ok(match self.params {
            FamilyParams::Normal { mean, variance } => {
                let mean = composed.apply(mean);
                let variance = variance * composed.scale * composed.scale;
                Self::from_params(FamilyParams::Normal { mean, variance }, Affine::IDENTITY)
            }
            p => Self::from_params(p, composed),
        })
    }

    /// Identifies the distribution with mean `mu` and quadratic
    /// `delta x^2 + beta x + gamma`.
    pub fn canonicalize(mu: f64, delta: f64, beta: f64, gamma: f64) -> Result<Self, PearsonError> {
        if [mu, delta, beta, gamma].iter().any(|v| !v.is_finite()) {
            return Err(PearsonError::RejectDegenerate("parameters must be finite".into()));
        }
        if delta > 0.0 {
            return Err(PearsonError::RejectPositiveDelta(delta));
        }
        let q = Quadratic::new(delta, beta, gamma)?;
        let mut dist = if delta < 0.0 {
            let disc = beta * beta - 4.0 * delta * gamma;
            if !(disc > 0.0) {
                return Err(PearsonError::RejectDegenerate(format!(
                    "q has no two real roots (discriminant {disc}), so it is never positive"
                )));
            }
            let sq = disc.sqrt();
            // Roots of delta x^2 + beta x + gamma with delta < 0, ordered.
            let (r1, r2) = {
                let a = (-beta + sq) / (2.0 * delta);
                let b = (-beta - sq) / (2.0 * delta);
                (a.min(b), a.max(b))
            };
            if !(mu > r1 && mu < r2) {
                return Err(PearsonError::RejectDegenerate(format!(
                    "mean {mu} must lie strictly between the roots {r1} and {r2} of q"
                )));
            }
            let width = r2 - r1;
            let s = -1.0 / delta;
            let alpha = s * (mu - r1) / width;
            let beta_p = s * (r2 - mu) / width;
            Self::from_params(FamilyParams::Beta { alpha, beta: beta_p }, Affine { scale: width, shift: r1 })
        } else if beta != 0.0 {
            let shape = (mu * beta + gamma) / (beta * beta);
            if !(shape > 0.0) {
                return Err(PearsonError::RejectDegenerate(format!("q(mu) = {} must be positive", mu * beta + gamma)));
            }
            Self::from_params(FamilyParams::Gamma { shape, rate: 1.0 }, Affine { scale: beta, shift: -gamma / beta })
        } else {
            if !(gamma > 0.0) {
                return Err(PearsonError::RejectDegenerate(format!(
                    "constant q = {gamma} must be positive for a normal law"
                )));
            }
            Self::from_params(FamilyParams::Normal { mean: mu, variance: gamma }, Affine::IDENTITY)
        };
        // Keep the caller's exact (mu, q) rather than the round-tripped ones.
        dist.mu = mu;
        dist.q = q;
        Ok(dist)
    }

    pub fn mean(&self) -> f64 {
        self.mu
    }

    pub fn quadratic(&self) -> Quadratic {
        self.q
    }

    pub fn delta(&self) -> f64 {
        self.q.delta
    }

    pub fn family(&self) -> FamilyKind {
        self.params.kind()
    }

    pub fn family_params(&self) -> FamilyParams {
        self.params
    }

    pub fn affine_map(&self) -> Affine {
        self.affine
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn variance(&self) -> f64 {
        self.params.variance() * self.affine.scale * self.affine.scale
    }

    pub fn density(&self, x: f64) -> Result<f64, PearsonError> {
        if !self.support.contains(x) {
            return Err(PearsonError::OutOfSupport { x, support: self.support });
        }
        let base = self.affine.invert(x);
        Ok(self.params.ln_density(base).exp() / self.affine.scale.abs())
    }

    /// `E q^i(X)` in closed form.
    pub fn moment_q_power(&self, i: usize) -> f64 {
        self.params.q_moment(i) * self.affine.scale.powi(2 * i as i32)
    }

    /// The distribution with density proportional to `q^i f`.
    pub fn derived_distribution(&self, i: usize) -> Self {
        if i == 0 {
            return self.clone();
        }
        Self::from_params(self.params.derived(i), self.affine)
    }

    /// `E|X|^a < inf`.
    pub fn moment_exists(&self, a: f64) -> bool {
        moment_exists_for_delta(self.q.delta, a)
    }

    /// The density is unbounded at a finite support endpoint, which slows
    /// quadrature convergence for non-polynomial integrands.
    pub fn endpoint_singular(&self) -> bool {
        self.params.endpoint_singular()
    }
}

/// `E|X|^a` is finite exactly when `delta < 1/(a-1)` (for `a > 1`).
pub fn moment_exists_for_delta(delta: f64, a: f64) -> bool {
    assert!(a > 1.0, "moment order must exceed one");
    delta < 1.0 / (a - 1.0)
}

fn map_endpoint(e: Endpoint, affine: Affine) -> Endpoint {
    match e {
        Endpoint::Finite(v) => Endpoint::Finite(affine.apply(v)),
        Endpoint::PosInf if affine.scale > 0.0 => Endpoint::PosInf,
        Endpoint::PosInf => Endpoint::NegInf,
        Endpoint::NegInf if affine.scale > 0.0 => Endpoint::NegInf,
        Endpoint::NegInf => Endpoint::PosInf,
    }
}

impl fmt::Display for PearsonDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.params {
            FamilyParams::Normal { mean, variance } => write!(f, "normal(mu={mean}, sigma2={variance})")?,
            FamilyParams::Gamma { shape, rate } => write!(f, "gamma(alpha={shape}, theta={rate})")?,
            FamilyParams::Beta { alpha, beta } => write!(f, "beta(alpha={alpha}, beta={beta})")?,
        }
        if self.affine != Affine::IDENTITY {
            write!(f, " mapped by y = {}*x + {}", self.affine.scale, self.affine.shift)?;
        }
        Ok(())
    }
}

/// Parses `normal:mu=..,sigma2=..`, `gamma:alpha=..,theta=..`,
/// `beta:alpha=..,beta=..` or `pearson:mu=..,delta=..,beta=..,gamma=..`.
/// Values accept decimal or `p/q` syntax.
pub fn parse_literal(literal: &str) -> Result<PearsonDistribution, PearsonError> {
    let fail = |reason: String| PearsonError::Literal { literal: literal.to_string(), reason };
    let (family, rest) = literal.split_once(':').ok_or_else(|| fail("expected `<family>:<key>=<value>,...`".into()))?;
    let mut pairs = Vec::new();
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| fail(format!("`{item}` is not key=value")))?;
        let value = parse_real(v).ok_or_else(|| fail(format!("`{v}` is not a finite real")))?;
        pairs.push((k.trim().to_string(), value));
    }
    let keys: &[&str] = match family.trim() {
        "normal" => &["mu", "sigma2"],
        "gamma" => &["alpha", "theta"],
        "beta" => &["alpha", "beta"],
        "pearson" => &["mu", "delta", "beta", "gamma"],
        other => return Err(fail(format!("unknown family `{other}` (normal, gamma, beta, pearson)"))),
    };
    for (k, _) in &pairs {
        if !keys.contains(&k.as_str()) {
            return Err(fail(format!("unexpected key `{k}`, expected {}", keys.join(", "))));
        }
    }
    let get = |key: &str| {
        pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| fail(format!("missing key `{key}`")))
    };
    match family.trim() {
        "normal" => PearsonDistribution::normal(get("mu")?, get("sigma2")?),
        "gamma" => PearsonDistribution::gamma(get("alpha")?, get("theta")?),
        "beta" => PearsonDistribution::beta(get("alpha")?, get("beta")?),
        _ => PearsonDistribution::canonicalize(get("mu")?, get("delta")?, get("beta")?, get("gamma")?),
    }
}
