use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub fn name(&self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(&self, v: f64) -> Result<f64, EvalError> {
        match self {
            Func::Exp => Ok(v.exp()),
            Func::Log if v > 0.0 => Ok(v.ln()),
            Func::Log => Err(EvalError::Domain { func: "log", arg: v }),
            Func::Sin => Ok(v.sin()),
            Func::Cos => Ok(v.cos()),
            Func::Sqrt if v >= 0.0 => Ok(v.sqrt()),
            Func::Sqrt => Err(EvalError::Domain { func: "sqrt", arg: v }),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("{func} is undefined at {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("result is not a number")]
    NotANumber,
}

/// Univariate expression in the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power.
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let den = b.eval(x)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(x)? / den
            }
            Expr::Pow(a, k) => {
                let base = a.eval(x)?;
                if base == 0.0 && *k < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                base.powi(*k)
            }
            Expr::Call(f, a) => f.apply(a.eval(x)?)?,
        };
        if v.is_nan() {
            Err(EvalError::NotANumber)
        } else {
            Ok(v)
        }
    }

    /// Polynomial degree when the expression is a polynomial in `x`.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => Some(0),
            Expr::Var => Some(1),
            Expr::Neg(a) => a.polynomial_degree(),
            Expr::Add(a, b) | Expr::Sub(a, b) => Some(a.polynomial_degree()?.max(b.polynomial_degree()?)),
            Expr::Mul(a, b) => Some(a.polynomial_degree()? + b.polynomial_degree()?),
            Expr::Div(a, b) => match **b {
                Expr::Const(c) if c != 0.0 => a.polynomial_degree(),
                _ => None,
            },
            Expr::Pow(a, k) if *k >= 0 => Some(a.polynomial_degree()? * *k as usize),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 0.0)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::Var | Expr::Call(..) => 5,
        }
    }
}

struct Wrapped<'a>(&'a Expr, bool);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str("x"),
            Expr::Neg(a) => write!(f, "-{}", Wrapped(a, a.precedence() < 3)),
            Expr::Add(a, b) => write!(f, "{} + {}", Wrapped(a, a.precedence() < p), Wrapped(b, b.precedence() <= p)),
            Expr::Sub(a, b) => write!(f, "{} - {}", Wrapped(a, a.precedence() < p), Wrapped(b, b.precedence() <= p)),
            Expr::Mul(a, b) => write!(f, "{}*{}", Wrapped(a, a.precedence() < p), Wrapped(b, b.precedence() <= p)),
            Expr::Div(a, b) => write!(f, "{}/{}", Wrapped(a, a.precedence() < p), Wrapped(b, b.precedence() <= p)),
            Expr::Pow(a, k) => write!(f, "{}^{}", Wrapped(a, a.precedence() <= p), k),
            Expr::Call(func, a) => write!(f, "{}({})", func.name(), a),
        }
    }
}
