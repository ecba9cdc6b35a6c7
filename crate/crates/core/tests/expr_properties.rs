mod support;

use proptest::prelude::*;

use relmech::expr::{Expr, ExprError};
use support::{arb_expr, central_difference, env, VARS};

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 3)
}

proptest! {
    #[test]
    fn printing_then_parsing_round_trips(e in arb_expr()) {
        let printed = e.to_string();
        let reparsed = Expr::parse(&printed).unwrap();
        prop_assert_eq!(reparsed, e, "printed as {}", printed);
    }

    #[test]
    fn simplify_preserves_values(e in arb_expr(), p in point()) {
        if let Ok(original) = e.evaluate(&env(&p)) {
            let simplified = e.simplify().evaluate(&env(&p)).unwrap();
            prop_assert!((original - simplified).abs() <= 1e-12 * original.abs().max(1.0),
                "{} -> {}: {} vs {}", e, e.simplify(), original, simplified);
        }
    }

    #[test]
    fn simplify_is_idempotent(e in arb_expr()) {
        let once = e.simplify();
        prop_assert_eq!(once.simplify(), once);
    }

    #[test]
    fn derivative_matches_central_difference(e in arb_expr(), p in point(), i in 0usize..3) {
        let var = VARS[i];
        let d = e.differentiate(var).unwrap();
        if let (Ok(sym), Some(fd)) = (d.evaluate(&env(&p)), central_difference(&e, var, &p)) {
            prop_assert!((sym - fd).abs() <= 1e-5 * sym.abs().max(1.0),
                "d/d{} {} = {} at {:?}: {} vs {}", var, e, d, p, sym, fd);
        }
    }

    #[test]
    fn derivative_of_absent_variable_vanishes(e in arb_expr(), p in point()) {
        if let Ok(v) = e.differentiate("w").unwrap().evaluate(&env(&p)) {
            prop_assert_eq!(v, 0.0);
        }
    }
}

#[test]
fn lexical_error_reports_offset() {
    assert_eq!(Expr::parse("x + $"), Err(ExprError::Lexical { offset: 4, ch: '$' }));
}

#[test]
fn syntax_errors_report_offsets() {
    let offset = |src: &str| match Expr::parse(src) {
        Err(ExprError::Syntax { offset, .. }) => offset,
        other => panic!("{src}: {other:?}"),
    };
    assert_eq!(offset("(x + 1"), 0);
    assert_eq!(offset("x +"), 3);
    assert_eq!(offset("sin(x, y)"), 5);
    assert_eq!(offset("foo(x)"), 0);
    assert_eq!(offset(""), 0);
}

#[test]
fn non_constant_exponent_is_unsupported() {
    let e = Expr::parse("x^y").unwrap();
    assert!(matches!(e.differentiate("x"), Err(ExprError::Unsupported(_))));
}

#[test]
fn worked_derivatives() {
    let d = |src: &str, v: &str| Expr::parse(src).unwrap().differentiate(v).unwrap();
    assert_eq!(d("r^2", "r"), Expr::parse("2*r").unwrap());
    assert_eq!(d("sin(x)*x", "x"), Expr::parse("cos(x)*x + sin(x)").unwrap());
    let e = d("ln(x)", "x").evaluate(&env(&[4.0, 0.0, 0.0])).unwrap();
    assert_eq!(e, 0.25);
}
