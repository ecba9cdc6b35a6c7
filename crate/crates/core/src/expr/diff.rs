use super::simplify::{binary, neg};
use super::{BinOp, Expr, ExprError, Func};

pub(super) fn differentiate(e: &Expr, var: &str) -> Result<Expr, ExprError> {
    Ok(derive(e, var)?.simplify())
}

fn add(a: Expr, b: Expr) -> Expr {
    binary(BinOp::Add, a, b)
}

fn sub(a: Expr, b: Expr) -> Expr {
    binary(BinOp::Sub, a, b)
}

fn mul(a: Expr, b: Expr) -> Expr {
    binary(BinOp::Mul, a, b)
}

fn div(a: Expr, b: Expr) -> Expr {
    binary(BinOp::Div, a, b)
}

fn pow(a: Expr, b: Expr) -> Expr {
    binary(BinOp::Pow, a, b)
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::call(f, a)
}

fn derive(e: &Expr, var: &str) -> Result<Expr, ExprError> {
    Ok(match e {
        Expr::Const(_) => Expr::Const(0.0),
        Expr::Var(name) => Expr::Const(if name == var { 1.0 } else { 0.0 }),
        Expr::Neg(a) => neg(derive(a, var)?),
        Expr::Binary(op, l, r) => match op {
            BinOp::Add => add(derive(l, var)?, derive(r, var)?),
            BinOp::Sub => sub(derive(l, var)?, derive(r, var)?),
            BinOp::Mul => {
                let (dl, dr) = (derive(l, var)?, derive(r, var)?);
                add(mul(dl, (**r).clone()), mul((**l).clone(), dr))
            }
            BinOp::Div => {
                let (dl, dr) = (derive(l, var)?, derive(r, var)?);
                let numer = sub(mul(dl, (**r).clone()), mul((**l).clone(), dr));
                div(numer, pow((**r).clone(), Expr::Const(2.0)))
            }
            BinOp::Pow => {
                let exponent = match r.simplify() {
                    Expr::Const(c) => c,
                    other => {
                        return Err(ExprError::Unsupported(format!(
                            "non-constant exponent `{other}`"
                        )))
                    }
                };
                let dl = derive(l, var)?;
                let outer = mul(
                    Expr::Const(exponent),
                    pow((**l).clone(), Expr::Const(exponent - 1.0)),
                );
                mul(outer, dl)
            }
        },
        Expr::Call(f, a) => {
            let da = derive(a, var)?;
            let a = (**a).clone();
            let outer = match f {
                Func::Sin => call(Func::Cos, a),
                Func::Cos => neg(call(Func::Sin, a)),
                Func::Tan => div(
                    Expr::Const(1.0),
                    pow(call(Func::Cos, a), Expr::Const(2.0)),
                ),
                Func::Exp => call(Func::Exp, a),
                Func::Ln => div(Expr::Const(1.0), a),
                Func::Sqrt => div(Expr::Const(1.0), mul(Expr::Const(2.0), call(Func::Sqrt, a))),
                // sign(a); undefined at a = 0, which evaluation reports as a domain error
                Func::Abs => div(a.clone(), call(Func::Abs, a)),
            };
            mul(outer, da)
        }
    })
}
