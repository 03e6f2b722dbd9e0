//! Target functions: parsing, symbolic derivatives and class membership.

mod diff;
mod expr;
mod membership;
mod parse;

pub use diff::{derivative_chain, differentiate, simplify};
pub use expr::{EvalError, Expr, Func};
pub use membership::{check_membership, classify, Finiteness, MembershipError, MembershipProbe, MembershipReport, Verdict, PROBE_SIZES};
pub use parse::{parse, SyntaxError};
