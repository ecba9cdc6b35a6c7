#![allow(dead_code)]

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use relmech::expr::{BinOp, Environment, Expr, Func};

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// Random expression trees over `x`, `y`, `z` with small half-integer
/// constants, every binary operator (integer exponents only) and every
/// function except `abs`.
pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-6i32..=6).prop_map(|c| Expr::constant(f64::from(c) * 0.5)),
        prop::sample::select(VARS.to_vec()).prop_map(Expr::var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (
                inner.clone(),
                inner.clone(),
                prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div])
            )
                .prop_map(|(l, r, op)| Expr::binary(op, l, r)),
            (inner.clone(), 0i32..=3).prop_map(|(b, n)| Expr::binary(BinOp::Pow, b, Expr::constant(f64::from(n)))),
            (
                inner.clone(),
                prop::sample::select(vec![Func::Sin, Func::Cos, Func::Tan, Func::Exp, Func::Ln, Func::Sqrt])
            )
                .prop_map(|(a, f)| Expr::call(f, a)),
            inner.prop_map(Expr::neg),
        ]
    })
}

/// `n` expressions drawn deterministically from [`arb_expr`].
pub fn sample_exprs(n: usize) -> Vec<Expr> {
    let mut runner = TestRunner::deterministic();
    let strategy = arb_expr();
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy never rejects").current())
        .collect()
}

pub fn env(point: &[f64]) -> Environment {
    VARS.iter().zip(point).map(|(v, x)| (*v, *x)).collect()
}

/// Central difference of `e` along `var` with step `1e-6 · max(1, |x|)`.
/// `None` when either evaluation leaves the domain.
pub fn central_difference(e: &Expr, var: &str, point: &[f64]) -> Option<f64> {
    let i = VARS.iter().position(|v| *v == var)?;
    let h = 1e-6 * point[i].abs().max(1.0);
    let mut plus = point.to_vec();
    let mut minus = point.to_vec();
    plus[i] += h;
    minus[i] -= h;
    let fp = e.evaluate(&env(&plus)).ok()?;
    let fm = e.evaluate(&env(&minus)).ok()?;
    Some((fp - fm) / (2.0 * h))
}
