//! Command-line front end. [`run`] parses arguments, writes reports to `out`
//! and diagnostics to `err`, and returns the process exit code.
//!
//! Exit codes: 0 success, 1 input error, 2 trivial (infinite) bound,
//! 3 a numerical or exact check failed.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{self, BoundReport, BoundsError, Comparison, Engine, Settings, DEFAULT_QUAD_SIZE};
use crate::exactcheck::{self, CheckRow, Grid, Rational};
use crate::funcspace::{self, Expr, Verdict};
use crate::pearson::{self, PearsonDistribution};
use crate::scalar::parse_rational;
use crate::summation::Summation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_TRIVIAL: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Largest accepted `m + n`.
pub const MAX_TOTAL_ORDER: usize = 24;

const MAX_QUAD_SIZE: usize = 4096;

/// Deltas used by `verify` when none is given.
pub const DEFAULT_DELTAS: [&str; 4] = ["0", "-1/7", "-1/2", "-1"];

#[derive(Debug, Parser)]
#[command(name = "varbound", version, about = "Variance bounds for functions of Pearson random variables")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one bound S_{m,n}(g) (or a legacy bound) against Var g(X).
    Bound(BoundArgs),
    /// Evaluate S_{m,n}(g) for m = 0..=m-max.
    Sweep(SweepArgs),
    /// Compare S_{m,n} across m and against the legacy bounds.
    Compare(CompareArgs),
    /// Check the exact identities behind the bound coefficients.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct Target {
    /// Distribution literal, e.g. normal:mu=0,sigma2=1, gamma:alpha=2,theta=1,
    /// beta:alpha=2,beta=3 or pearson:mu=0,delta=-0.25,beta=0,gamma=1.
    #[arg(long)]
    pub dist: String,
    /// The function g, e.g. "x^3 - 2*x" or "exp(x/2)".
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    /// Gauss rule size for expectations.
    #[arg(long, default_value_t = DEFAULT_QUAD_SIZE)]
    pub quad_size: usize,
    /// Tolerance for the sign, equality and comparison flags (relative to max(1, Var)).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Attach the residual cap of order tau (n <= tau <= m+n+1).
    #[arg(long)]
    pub tau: Option<usize>,
    /// Bound family: universal, poincare, bessel, chernoff-strong or chernoff-weak.
    #[arg(long, default_value = "universal")]
    pub kind: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Sweep n from --n up to this value as well.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub m_max: usize,
    #[arg(long, default_value = "universal")]
    pub kind: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub m_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest m and n in the grid.
    #[arg(long, default_value_t = 6)]
    pub max_order: usize,
    /// Largest k for the hypergeometric and rho checks.
    #[arg(long, default_value_t = 12)]
    pub max_k: usize,
    /// A single rational delta <= 0 (default: 0, -1/7, -1/2, -1).
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

/// A failure that ends the run with a given exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Divergent(_) | BoundsError::MembershipFailure(_) => {
                Failure { code: EXIT_TRIVIAL, message: e.to_string() }
            }
            _ => Failure::input(e.to_string()),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(&config, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match &config.command {
        Command::Bound(a) => cmd_bound(a, out, err),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::Compare(a) => cmd_compare(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
    }
}

struct Prepared {
    dist: PearsonDistribution,
    g: Expr,
    settings: Settings,
}

fn prepare(t: &Target, err: &mut dyn Write) -> Result<Prepared, Failure> {
    let dist = pearson::parse_literal(&t.dist).map_err(|e| Failure::input(format!("--dist: {e}")))?;
    let g = funcspace::parse(&t.g).map_err(|e| Failure::input(format!("--g: {e}")))?;
    if t.quad_size == 0 || t.quad_size > MAX_QUAD_SIZE {
        return Err(Failure::input(format!("--quad-size must lie in 1..={MAX_QUAD_SIZE}")));
    }
    if let Some(tol) = t.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure::input("--tol must be a positive finite number"));
        }
    }
    if dist.endpoint_singular() {
        warn(err, &format!("{dist} has an unbounded density at a finite endpoint; quadrature converges slowly there"));
    }
    let settings = Settings { quad_size: t.quad_size, summation: Summation::from_env(), tolerance: t.tol };
    Ok(Prepared { dist, g, settings })
}

fn warn(err: &mut dyn Write, message: &str) {
    let _ = writeln!(err, "warning: {message}");
}

fn check_total(m: usize, n: usize) -> Result<(), Failure> {
    if m + n > MAX_TOTAL_ORDER {
        Err(Failure::input(format!("m + n = {} exceeds the maximum of {MAX_TOTAL_ORDER}", m + n)))
    } else {
        Ok(())
    }
}

fn strategy(kind: &str) -> Result<&'static dyn bounds::BoundStrategy, Failure> {
    bounds::lookup(kind).ok_or_else(|| {
        let names: Vec<&str> = bounds::registry().iter().map(|s| s.name()).collect();
        Failure::input(format!("unknown --kind {kind:?}; expected one of {}", names.join(", ")))
    })
}

fn engine(p: &Prepared, order: usize) -> Result<Engine, Failure> {
    Ok(Engine::new(&p.dist, &p.g, order, &p.settings)?)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::input(format!("cannot write output: {e}")))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn report_warnings(report: &BoundReport, err: &mut dyn Write) {
    match report.membership {
        Verdict::TrivialBound => warn(
            err,
            &format!(
                "trivial bound for ({}, {}): {}",
                report.m,
                report.n,
                report.diagnostic.as_deref().unwrap_or("a required expectation diverges")
            ),
        ),
        Verdict::Unknown => warn(
            err,
            &format!(
                "membership of g for ({}, {}) could not be confirmed: {}",
                report.m,
                report.n,
                report.diagnostic.as_deref().unwrap_or("moment estimates did not settle")
            ),
        ),
        Verdict::Member => {}
    }
    if !report.is_trivial() && !report.sign_ok {
        warn(err, &format!("{} bound ({}, {}) is violated beyond tolerance", report.kind, report.m, report.n));
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Member => "member",
        Verdict::TrivialBound => "trivial_bound",
        Verdict::Unknown => "unknown",
    }
}

const CSV_HEADER: [&str; 12] =
    ["kind", "m", "n", "direction", "bound", "variance", "gap", "residual", "sign_ok", "equality", "membership", "cap"];

fn csv_rows(reports: &[BoundReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).unwrap();
    for r in reports {
        let direction = match r.direction {
            bounds::Direction::Upper => "upper",
            bounds::Direction::Lower => "lower",
        };
        w.write_record([
            r.kind.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            direction.to_string(),
            r.bound.to_string(),
            opt(r.variance),
            opt(r.gap()),
            opt(r.residual),
            r.sign_ok.to_string(),
            r.equality.to_string(),
            verdict_name(r.membership).to_string(),
            opt(r.cap.as_ref().map(|c| c.cap)),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn table_rows(reports: &[BoundReport]) -> String {
    let mut s = format!(
        "{:<16} {:>3} {:>3} {:>24} {:>24} {:>12} {:>7} {:>8}  {}\n",
        "kind", "m", "n", "bound", "variance", "gap", "sign_ok", "equality", "membership"
    );
    for r in reports {
        let _ = writeln!(
            s,
            "{:<16} {:>3} {:>3} {:>24} {:>24} {:>12} {:>7} {:>8}  {}",
            r.kind,
            r.m,
            r.n,
            r.bound.to_string(),
            opt(r.variance),
            r.gap().map(|g| format!("{g:.3e}")).unwrap_or_default(),
            r.sign_ok,
            r.equality,
            verdict_name(r.membership)
        );
    }
    s
}

fn bound_table(r: &BoundReport) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(s, "{k:<10} {v}");
    };
    line("kind", r.kind.to_string());
    line("m", r.m.to_string());
    line("n", r.n.to_string());
    line("bound", r.bound.to_string());
    line("variance", opt(r.variance));
    line("residual", opt(r.residual));
    line("sign_ok", r.sign_ok.to_string());
    line("equality", r.equality.to_string());
    line("a", list(&r.a));
    line("b", list(&r.b));
    line("lambda", list(&r.lambda));
    line("membership", verdict_name(r.membership).to_string());
    if let Some(c) = &r.cap {
        line("tau", c.tau.to_string());
        line("cap", c.cap.to_string());
    }
    s
}

fn cmd_bound(a: &BoundArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let strat = strategy(&a.kind)?;
    check_total(a.m, a.n)?;
    strat.validate(a.m, a.n).map_err(Failure::from)?;
    if let Some(tau) = a.tau {
        if a.kind != "universal" {
            return Err(Failure::input("--tau applies to the universal bound only"));
        }
        if tau < a.n || tau > a.m + a.n + 1 {
            return Err(Failure::input(format!("--tau must lie in [{}, {}]", a.n, a.m + a.n + 1)));
        }
    }
    let p = prepare(&a.target, err)?;
    let order = a.m.max(a.n).max(a.tau.unwrap_or(0));
    let eng = engine(&p, order)?;
    let report = match a.tau {
        Some(tau) => eng.bound_with_cap(a.m, a.n, tau)?,
        None => eng.bound(strat, a.m, a.n)?,
    };
    report_warnings(&report, err);
    let text = match a.format {
        Format::Json => json(&report),
        Format::Csv => csv_rows(std::slice::from_ref(&report)),
        Format::Table => bound_table(&report),
    };
    emit(out, &text)?;
    Ok(if report.is_trivial() {
        EXIT_TRIVIAL
    } else if !report.sign_ok {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let strat = strategy(&a.kind)?;
    let n_max = a.n_max.unwrap_or(a.n);
    if n_max < a.n {
        return Err(Failure::input("--n-max must be at least --n"));
    }
    check_total(a.m_max, n_max)?;
    for m in 0..=a.m_max {
        for n in a.n..=n_max {
            strat.validate(m, n).map_err(Failure::from)?;
        }
    }
    let p = prepare(&a.target, err)?;
    let eng = engine(&p, a.m_max.max(n_max))?;
    let reports = eng.sweep(strat, a.m_max, a.n..=n_max)?;
    for r in &reports {
        report_warnings(r, err);
    }
    let text = match a.format {
        Format::Json => json(&reports),
        Format::Csv => csv_rows(&reports),
        Format::Table => table_rows(&reports),
    };
    emit(out, &text)?;
    Ok(if reports.iter().any(|r| r.is_trivial()) {
        EXIT_TRIVIAL
    } else if reports.iter().any(|r| !r.sign_ok) {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

fn comparison_table(c: &Comparison) -> String {
    let mut s = table_rows(&c.rows);
    let _ = writeln!(s, "\nvariance {}", c.variance);
    let _ = writeln!(s, "{:<22} {:>24} {:>24} {:>24}  holds", "check", "factor", "lhs", "rhs");
    for z in &c.zeta_checks {
        let name = format!("zeta m1={} m2={}", z.m1, z.m2);
        let _ = writeln!(s, "{:<22} {:>24} {:>24} {:>24}  {}", name, z.factor, z.lhs, z.rhs, z.holds);
    }
    let k = &c.corollary;
    let _ = writeln!(s, "{:<22} {:>24} {:>24} {:>24}  {}", "corollary", k.factor, k.lhs, k.rhs, k.holds);
    for (name, ch) in [("chernoff-strong", &c.chernoff_strong), ("chernoff-weak", &c.chernoff_weak)] {
        let _ = writeln!(s, "{:<22} {:>24} {:>24} {:>24}  {}", name, "", ch.universal, ch.legacy, ch.holds);
    }
    s
}

fn comparison_csv(c: &Comparison) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "m1", "m2", "factor", "lhs", "rhs", "holds"]).unwrap();
    for z in &c.zeta_checks {
        w.write_record(["zeta", &z.m1.to_string(), &z.m2.to_string(), &z.factor.to_string(), &z.lhs.to_string(), &z.rhs.to_string(), &z.holds.to_string()])
            .unwrap();
    }
    let k = &c.corollary;
    w.write_record(["corollary", &k.m1.to_string(), &k.m2.to_string(), &k.factor.to_string(), &k.lhs.to_string(), &k.rhs.to_string(), &k.holds.to_string()])
        .unwrap();
    for (name, ch) in [("chernoff-strong", &c.chernoff_strong), ("chernoff-weak", &c.chernoff_weak)] {
        w.write_record([name, "", "", "", &ch.universal.to_string(), &ch.legacy.to_string(), &ch.holds.to_string()])
            .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn cmd_compare(a: &CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if a.n == 0 {
        return Err(Failure::input("compare needs --n >= 1"));
    }
    check_total(a.m_max.max(a.n), a.n)?;
    let p = prepare(&a.target, err)?;
    let eng = engine(&p, a.m_max.max(a.n))?;
    let membership = eng.membership(a.m_max.max(a.n), a.n)?;
    match membership.verdict {
        Verdict::TrivialBound => {
            return Err(Failure {
                code: EXIT_TRIVIAL,
                message: format!(
                    "comparison is trivial: {}",
                    membership.diagnostic.unwrap_or_else(|| "a required expectation diverges".into())
                ),
            })
        }
        Verdict::Unknown => warn(
            err,
            &format!(
                "membership of g could not be confirmed: {}",
                membership.diagnostic.as_deref().unwrap_or("moment estimates did not settle")
            ),
        ),
        Verdict::Member => {}
    }
    let c = eng.compare(a.n, a.m_max)?;
    let text = match a.format {
        Format::Json => json(&c),
        Format::Csv => comparison_csv(&c),
        Format::Table => comparison_table(&c),
    };
    emit(out, &text)?;
    if c.all_hold() {
        Ok(EXIT_OK)
    } else {
        warn(err, "at least one comparison check failed");
        Ok(EXIT_CHECK_FAILED)
    }
}

fn parse_delta(text: &str) -> Result<Rational, Failure> {
    let d = parse_rational(text).ok_or_else(|| Failure::input(format!("--delta: {text:?} is not a rational number")))?;
    if d > Rational::from_integer(0.into()) {
        return Err(Failure::input("--delta must be <= 0"));
    }
    Ok(d)
}

#[derive(Serialize)]
struct Summary<'a> {
    identity: &'a str,
    checks: usize,
    passed: usize,
}

fn summarize(rows: &[CheckRow]) -> Vec<Summary<'_>> {
    let mut out: Vec<Summary> = Vec::new();
    for r in rows {
        let i = match out.iter().position(|s| s.identity == r.identity) {
            Some(i) => i,
            None => {
                out.push(Summary { identity: r.identity, checks: 0, passed: 0 });
                out.len() - 1
            }
        };
        out[i].checks += 1;
        out[i].passed += usize::from(r.holds);
    }
    out
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    if a.max_order == 0 || a.max_order > MAX_TOTAL_ORDER / 2 {
        return Err(Failure::input(format!("--max-order must lie in 1..={}", MAX_TOTAL_ORDER / 2)));
    }
    if a.max_k > 64 {
        return Err(Failure::input("--max-k must be at most 64"));
    }
    let deltas = match &a.delta {
        Some(d) => vec![parse_delta(d)?],
        None => DEFAULT_DELTAS.iter().map(|d| parse_delta(d)).collect::<Result<_, _>>()?,
    };
    let grid = Grid { max_m: a.max_order, max_n: a.max_order, max_k: a.max_k, deltas };
    let rows = exactcheck::verify(&grid);
    let text = match a.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["identity", "m", "n", "k", "delta", "holds"]).unwrap();
            for r in &rows {
                let k = r.k.map(|k| k.to_string()).unwrap_or_default();
                w.write_record([r.identity, &r.m.to_string(), &r.n.to_string(), &k, &r.delta, &r.holds.to_string()])
                    .unwrap();
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::Table => {
            let mut s = format!("{:<20} {:>7} {:>7}  {}\n", "identity", "checks", "passed", "status");
            for x in summarize(&rows) {
                let status = if x.passed == x.checks { "pass" } else { "FAIL" };
                let _ = writeln!(s, "{:<20} {:>7} {:>7}  {}", x.identity, x.checks, x.passed, status);
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(if rows.iter().all(|r| r.holds) { EXIT_OK } else { EXIT_CHECK_FAILED })
}
