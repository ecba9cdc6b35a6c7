use super::eval::{apply_binary, apply_func};
use super::{BinOp, Expr};

/// Bottom-up constant folding plus the identities `0+e`, `e+0`, `e-0`, `0-e`,
/// `1*e`, `e*1`, `0*e`, `e*0`, `e/1`, `e^1`, `e^0` and double negation.
///
/// Folding happens before any domain check: `0 * (1/x)` becomes `0` even
/// though the original fails at `x = 0`. A constant subtree that fails to
/// evaluate (such as `1/0`) is left unfolded so the error surfaces at
/// evaluation time.
pub(super) fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Var(_) => e.clone(),
        Expr::Neg(a) => neg(simplify(a)),
        Expr::Call(f, a) => {
            let a = simplify(a);
            if let Some(v) = a.as_const().and_then(|c| apply_func(*f, c).ok()) {
                return Expr::Const(v);
            }
            Expr::call(*f, a)
        }
        Expr::Binary(op, l, r) => binary(*op, simplify(l), simplify(r)),
    }
}

pub(super) fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::neg(other),
    }
}

/// Combines two already simplified operands.
pub(super) fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
    if let (Some(a), Some(b)) = (l.as_const(), r.as_const()) {
        if let Ok(v) = apply_binary(op, a, b) {
            return Expr::Const(v);
        }
    }
    match op {
        BinOp::Add if l.is_const(0.0) => r,
        BinOp::Add | BinOp::Sub if r.is_const(0.0) => l,
        BinOp::Sub if l.is_const(0.0) => neg(r),
        BinOp::Mul if l.is_const(0.0) || r.is_const(0.0) => Expr::Const(0.0),
        BinOp::Mul if l.is_const(1.0) => r,
        BinOp::Mul | BinOp::Div if r.is_const(1.0) => l,
        BinOp::Pow if r.is_const(1.0) => l,
        BinOp::Pow if r.is_const(0.0) => Expr::Const(1.0),
        _ => Expr::binary(op, l, r),
    }
}
