//! Recursive-descent parser.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;
//! primary = number | ident | ident "(" expr ")" | "(" expr ")" ;
//! ```
//!
//! `-` directly followed by a number literal becomes a negative constant.

use super::{BinOp, Expr, ExprError, Func, Token, TokenKind};

pub fn parse(tokens: &[Token]) -> Result<Expr, ExprError> {
    let mut p = Parser { tokens, pos: 0 };
    if tokens.is_empty() {
        return Err(ExprError::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(p.error_at(t, format!("unexpected `{}`", t.lexeme)));
    }
    Ok(e)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self, ops: &[&str]) -> Option<&'a str> {
        self.peek()
            .filter(|t| t.kind == TokenKind::Operator && ops.contains(&t.lexeme.as_str()))
            .map(|t| t.lexeme.as_str())
    }

    fn end_offset(&self) -> usize {
        self.tokens
            .last()
            .map(|t| t.offset + t.lexeme.chars().count())
            .unwrap_or(0)
    }

    fn error_at(&self, t: &Token, message: String) -> ExprError {
        ExprError::Syntax {
            offset: t.offset,
            message,
        }
    }

    fn unexpected_end(&self, wanted: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.end_offset(),
            message: format!("unexpected end of input, expected {wanted}"),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(op) = self.peek_op(&["+", "-"]) {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if op == "+" { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.peek_op(&["*", "/"]) {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if op == "*" { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek_op(&["-"]).is_some() {
            self.pos += 1;
            // `-2` is a literal, `-2^2` is still -(2^2).
            let literal = self.peek().filter(|t| t.kind == TokenKind::Number).is_some();
            let operand = self.unary()?;
            return Ok(match operand {
                Expr::Const(c) if literal => Expr::Const(-c),
                other => Expr::neg(other),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.peek_op(&["^"]).is_some() {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let t = self.peek().ok_or_else(|| self.unexpected_end("an operand"))?;
        self.pos += 1;
        match t.kind {
            TokenKind::Number => {
                let value: f64 = t
                    .lexeme
                    .parse()
                    .map_err(|_| self.error_at(t, format!("bad number `{}`", t.lexeme)))?;
                if !value.is_finite() {
                    return Err(self.error_at(t, format!("number `{}` is not finite", t.lexeme)));
                }
                Ok(Expr::Const(value))
            }
            TokenKind::Identifier => {
                let is_call = self.peek().is_some_and(|n| n.kind == TokenKind::LeftParen);
                if !is_call {
                    return Ok(Expr::Var(t.lexeme.clone()));
                }
                let func = Func::from_name(&t.lexeme)
                    .ok_or_else(|| self.error_at(t, format!("unknown function `{}`", t.lexeme)))?;
                self.pos += 1;
                let arg = self.expr()?;
                self.expect_close(t)?;
                Ok(Expr::call(func, arg))
            }
            TokenKind::LeftParen => {
                let inner = self.expr()?;
                self.expect_close(t)?;
                Ok(inner)
            }
            _ => Err(self.error_at(t, format!("unexpected `{}`", t.lexeme))),
        }
    }

    fn expect_close(&mut self, opener: &Token) -> Result<(), ExprError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::RightParen => {
                self.pos += 1;
                Ok(())
            }
            Some(t) if t.kind == TokenKind::Comma => {
                Err(self.error_at(t, "functions take exactly one argument".into()))
            }
            Some(t) => Err(self.error_at(t, format!("expected `)`, found `{}`", t.lexeme))),
            None => Err(ExprError::Syntax {
                offset: opener.offset,
                message: "unbalanced parenthesis".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Expr;
    use super::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    fn v(n: &str) -> Expr {
        Expr::var(n)
    }

    #[test]
    fn multiplication_binds_tighter_than_addition() {
        assert_eq!(
            p("2*r+1"),
            Expr::binary(BinOp::Add, Expr::binary(BinOp::Mul, c(2.0), v("r")), c(1.0))
        );
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(p("-x^2"), Expr::neg(Expr::binary(BinOp::Pow, v("x"), c(2.0))));
        assert_eq!(p("-2^2"), Expr::neg(Expr::binary(BinOp::Pow, c(2.0), c(2.0))));
        assert_eq!(p("-2"), c(-2.0));
    }

    #[test]
    fn power_is_right_associative() {
        assert_eq!(
            p("a^b^c"),
            Expr::binary(BinOp::Pow, v("a"), Expr::binary(BinOp::Pow, v("b"), v("c")))
        );
        assert_eq!(p("2^-1"), Expr::binary(BinOp::Pow, c(2.0), c(-1.0)));
    }

    #[test]
    fn subtraction_is_left_associative() {
        assert_eq!(
            p("a-b-c"),
            Expr::binary(BinOp::Sub, Expr::binary(BinOp::Sub, v("a"), v("b")), v("c"))
        );
    }

    #[test]
    fn unbalanced_paren_is_syntax_error() {
        assert!(matches!(Expr::parse("sin("), Err(ExprError::Syntax { .. })));
        assert!(matches!(Expr::parse("(x+1"), Err(ExprError::Syntax { offset: 0, .. })));
        assert!(matches!(Expr::parse("x+1)"), Err(ExprError::Syntax { offset: 3, .. })));
    }

    #[test]
    fn dangling_operator_and_multi_argument_calls_rejected() {
        assert!(matches!(Expr::parse("x+"), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(Expr::parse("sin(x, y)"), Err(ExprError::Syntax { offset: 5, .. })));
        assert!(matches!(Expr::parse("foo(x)"), Err(ExprError::Syntax { offset: 0, .. })));
        assert!(matches!(Expr::parse(""), Err(ExprError::Syntax { .. })));
        assert!(matches!(Expr::parse("2 3"), Err(ExprError::Syntax { offset: 2, .. })));
    }
}
