use std::collections::HashMap;

use super::{BinOp, Expr, ExprError, Func};

/// Variable bindings for [`Expr::evaluate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Environment {
    values: HashMap<String, f64>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        self.values.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for Environment {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        Environment {
            values: iter.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }
}

pub(super) fn evaluate(e: &Expr, env: &Environment) -> Result<f64, ExprError> {
    match e {
        Expr::Const(c) => Ok(*c),
        Expr::Var(name) => env.get(name).ok_or_else(|| ExprError::Unbound(name.clone())),
        Expr::Neg(a) => Ok(-evaluate(a, env)?),
        Expr::Binary(op, l, r) => apply_binary(*op, evaluate(l, env)?, evaluate(r, env)?),
        Expr::Call(f, a) => apply_func(*f, evaluate(a, env)?),
    }
}

pub(crate) fn apply_binary(op: BinOp, a: f64, b: f64) -> Result<f64, ExprError> {
    let v = match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => {
            if b == 0.0 {
                return Err(ExprError::Domain(format!("division by zero ({a} / 0)")));
            }
            a / b
        }
        BinOp::Pow => {
            if a == 0.0 && b < 0.0 {
                return Err(ExprError::Domain(format!("zero raised to negative power {b}")));
            }
            if a < 0.0 && b.fract() != 0.0 {
                return Err(ExprError::Domain(format!(
                    "negative base {a} raised to non-integer power {b}"
                )));
            }
            a.powf(b)
        }
    };
    finite(v, || format!("{a} {} {b}", op.symbol()))
}

pub(crate) fn apply_func(f: Func, x: f64) -> Result<f64, ExprError> {
    let v = match f {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => x.tan(),
        Func::Exp => x.exp(),
        Func::Ln => {
            if x <= 0.0 {
                return Err(ExprError::Domain(format!("ln of non-positive value {x}")));
            }
            x.ln()
        }
        Func::Sqrt => {
            if x < 0.0 {
                return Err(ExprError::Domain(format!("sqrt of negative value {x}")));
            }
            x.sqrt()
        }
        Func::Abs => x.abs(),
    };
    finite(v, || format!("{}({x})", f.name()))
}

fn finite(v: f64, what: impl FnOnce() -> String) -> Result<f64, ExprError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ExprError::Domain(format!("non-finite result of {}", what())))
    }
}

/// An expression whose variables have been resolved to positions in a slot
/// slice, for repeated evaluation without name lookups.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundExpr {
    source: Expr,
    code: Node,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Const(f64),
    Slot(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl BoundExpr {
    /// Resolves each variable of `e` to its index in `slots`.
    pub fn bind(e: &Expr, slots: &[&str]) -> Result<BoundExpr, ExprError> {
        Ok(BoundExpr {
            source: e.clone(),
            code: compile(e, slots)?,
        })
    }

    pub fn source(&self) -> &Expr {
        &self.source
    }

    pub fn as_const(&self) -> Option<f64> {
        match self.code {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    /// The same binding applied to `-e`.
    pub fn negated(&self) -> BoundExpr {
        BoundExpr {
            source: Expr::neg(self.source.clone()),
            code: Node::Neg(Box::new(self.code.clone())),
        }
    }

    /// Evaluates with `values[i]` bound to the i-th slot name.
    pub fn eval(&self, values: &[f64]) -> Result<f64, ExprError> {
        run(&self.code, values)
    }
}

fn compile(e: &Expr, slots: &[&str]) -> Result<Node, ExprError> {
    Ok(match e {
        Expr::Const(c) => Node::Const(*c),
        Expr::Var(name) => Node::Slot(
            slots
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| ExprError::Unbound(name.clone()))?,
        ),
        Expr::Neg(a) => Node::Neg(Box::new(compile(a, slots)?)),
        Expr::Binary(op, l, r) => {
            Node::Binary(*op, Box::new(compile(l, slots)?), Box::new(compile(r, slots)?))
        }
        Expr::Call(f, a) => Node::Call(*f, Box::new(compile(a, slots)?)),
    })
}

fn run(n: &Node, values: &[f64]) -> Result<f64, ExprError> {
    match n {
        Node::Const(c) => Ok(*c),
        Node::Slot(i) => Ok(values[*i]),
        Node::Neg(a) => Ok(-run(a, values)?),
        Node::Binary(op, l, r) => apply_binary(*op, run(l, values)?, run(r, values)?),
        Node::Call(f, a) => apply_func(*f, run(a, values)?),
    }
}
