//! Scalar expressions over named coordinates and velocities.
//!
//! Metric components, potentials, two-form coefficients and general work-form
//! components are written as text in scenario files and parsed into an [`Expr`]
//! tree. Derivatives are taken symbolically so the connection coefficients are
//! exact up to floating-point evaluation.
//!
//! The grammar is documented in `docs/expression-grammar.md`.

mod diff;
mod eval;
mod lexer;
mod parser;
mod simplify;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use eval::{BoundExpr, Environment};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

/// Errors raised while lexing, parsing, evaluating or differentiating.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("lexical error at offset {offset}: unexpected character {ch:?}")]
    Lexical { offset: usize, ch: char },
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("numeric domain error: {0}")]
    Domain(String),
    #[error("unsupported for differentiation: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// One-argument functions known to the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn constant(value: f64) -> Expr {
        Expr::Const(value)
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    /// Parses source text into an expression.
    pub fn parse(source: &str) -> Result<Expr, ExprError> {
        let tokens = tokenize(source)?;
        parse(&tokens)
    }

    pub fn is_const(&self, value: f64) -> bool {
        matches!(self, Expr::Const(c) if *c == value)
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Names of all variables referenced by the expression, sorted.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(name) => {
                out.insert(name.clone());
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.collect_vars(out),
            Expr::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => v == name,
            Expr::Neg(e) | Expr::Call(_, e) => e.contains_var(name),
            Expr::Binary(_, l, r) => l.contains_var(name) || r.contains_var(name),
        }
    }

    /// Replaces every occurrence of a variable found in `lookup` by a constant.
    pub fn substitute(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(v) => match lookup(v) {
                Some(value) => Expr::Const(value),
                None => Expr::Var(v.clone()),
            },
            Expr::Neg(e) => Expr::neg(e.substitute(lookup)),
            Expr::Call(f, e) => Expr::call(*f, e.substitute(lookup)),
            Expr::Binary(op, l, r) => Expr::binary(*op, l.substitute(lookup), r.substitute(lookup)),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(e) | Expr::Call(_, e) => 1 + e.size(),
            Expr::Binary(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn simplify(&self) -> Expr {
        simplify::simplify(self)
    }

    pub fn differentiate(&self, var: &str) -> Result<Expr, ExprError> {
        diff::differentiate(self, var)
    }

    pub fn evaluate(&self, env: &Environment) -> Result<f64, ExprError> {
        eval::evaluate(self, env)
    }
}

impl FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

// Printing parenthesizes every binary node, so `parse(e.to_string())` rebuilds
// the same tree. Negative constants print as `(-c)`, which the parser folds back
// into a single constant; a negated constant prints as `(-(c))`, which it does
// not. Negations are parenthesized so they survive as the base of `^`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if c.is_sign_negative() {
                    write!(f, "(-{})", -c)
                } else {
                    write!(f, "{c}")
                }
            }
            Expr::Var(name) => f.write_str(name),
            Expr::Neg(e) => match e.as_ref() {
                Expr::Const(_) => write!(f, "(-({e}))"),
                _ => write!(f, "(-{e})"),
            },
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}
