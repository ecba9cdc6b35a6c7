use proptest::prelude::*;

use relmech::expr::Expr;
use relmech::forces::{
    check_velocity_linear, endomorphism, is_contact, velocity_matrix, ContactTolerance, CovectorField, ForceForm,
    Potential, StateSampler, TwoFormField,
};
use relmech::geometry::{dotted_pairing, Chart, MetricField, TangentState};
use relmech::Error;

fn varying_two_form() -> TwoFormField {
    let chart = Chart::indexed(3);
    let p = |s: &str| Expr::parse(s).unwrap();
    TwoFormField::from_exprs(
        &chart,
        &[(0, 1, p("1 + x2^2")), (0, 2, p("sin(x0*x1)")), (1, 2, p("exp(-x0) - 0.5"))],
    )
    .unwrap()
}

fn curved_metric() -> MetricField {
    MetricField::conformal(&Chart::indexed(3), 0.4)
}

fn state() -> impl Strategy<Value = TangentState> {
    (prop::collection::vec(-1.5f64..1.5, 3), prop::collection::vec(-2.0f64..2.0, 3))
        .prop_map(|(q, v)| TangentState::new(q, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn two_form_is_antisymmetric(s in state()) {
        let m = varying_two_form().eval(&s.q).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(m[(i, j)], -m[(j, i)]);
            }
        }
    }

    #[test]
    fn two_form_force_is_contact(s in state()) {
        let f = ForceForm::from_two_form(varying_two_form());
        let alpha = f.eval(&s).unwrap();
        let residual = dotted_pairing(&alpha, &s).unwrap();
        let scale = alpha.norm() * s.qdot.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!(residual.abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn endomorphism_is_skew_adjoint(s in state(), w in prop::collection::vec(-2.0f64..2.0, 3)) {
        let me = curved_metric().eval(&s.q).unwrap();
        let e = endomorphism(&varying_two_form(), &me, &s.q).unwrap();
        let v = &s.qdot;
        let lhs = me.inner(&e.apply(v), &w);
        let rhs = -me.inner(v, &e.apply(&w));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn endomorphism_solves_the_force_equation(s in state()) {
        // i_w T2 + alpha = 0 for w = Phi(qdot)
        let me = curved_metric().eval(&s.q).unwrap();
        let phi2 = varying_two_form();
        let w = endomorphism(&phi2, &me, &s.q).unwrap().apply(&s.qdot);
        let alpha = ForceForm::from_two_form(phi2).eval(&s).unwrap();
        let lowered = me.g.mul_vec(&w);
        for j in 0..3 {
            prop_assert!((lowered[j] + alpha.0[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn velocity_matrix_reconstructs_the_two_form(s in state()) {
        let phi2 = varying_two_form();
        let m = velocity_matrix(&ForceForm::from_two_form(phi2.clone()), &s.q).unwrap();
        let input = phi2.eval(&s.q).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((m[(i, j)] - input[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_form_force_is_velocity_linear(s in state()) {
        prop_assume!(s.qdot.iter().any(|v| v.abs() > 1e-3));
        let f = ForceForm::from_two_form(varying_two_form());
        prop_assert!(check_velocity_linear(&f, &s).is_ok());
    }
}

#[test]
fn brute_force_contraction_oracle() {
    // alpha_j = qdot^i Phi_ij, then w^l = -g^lk alpha_k with g = I
    let f = ForceForm::from_two_form(TwoFormField::constant(3, &[(0, 1, 1.0)]).unwrap());
    let s = TangentState::new(vec![0.0; 3], vec![0.7, -0.2, 0.4]);
    let phi = [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]];
    let alpha = f.eval(&s).unwrap();
    for j in 0..3 {
        let oracle: f64 = (0..3).map(|i| s.qdot[i] * phi[i][j]).sum();
        assert_eq!(alpha.0[j], oracle);
    }
    let me = MetricField::euclidean(3).eval(&s.q).unwrap();
    let e = endomorphism(&TwoFormField::constant(3, &[(0, 1, 1.0)]).unwrap(), &me, &s.q).unwrap();
    // (v1, v2, v3) -> (v2, -v1, 0)
    assert_eq!(e.apply(&s.qdot), vec![-0.2, -0.7, 0.0]);
}

#[test]
fn contact_test_is_metric_free_and_seeded() {
    let f = ForceForm::from_two_form(varying_two_form());
    let run = |seed| {
        let mut sampler = StateSampler::cube(3, 1.0, seed);
        is_contact(&f, &mut sampler, 500, ContactTolerance::Normalized(1e-12)).unwrap()
    };
    let a = run(3);
    assert!(a.holds);
    assert_eq!(a, run(3));
}

#[test]
fn potential_and_drag_are_not_contact() {
    let chart = Chart::indexed(2);
    let u = Potential::from_expr(&chart, &Expr::parse("x0^2 + x1").unwrap()).unwrap();
    let drag = CovectorField::from_exprs(&chart, &[Expr::parse("x0_dot").unwrap(), Expr::parse("x1_dot").unwrap()]).unwrap();
    for f in [ForceForm::from_potential(u), ForceForm::General(drag)] {
        let mut sampler = StateSampler::cube(2, 1.0, 1);
        let v = is_contact(&f, &mut sampler, 200, ContactTolerance::Normalized(1e-12)).unwrap();
        assert!(!v.holds);
        assert!(v.max_normalized_residual > 1e-3);
    }
}

#[test]
fn quadratic_force_is_not_velocity_linear() {
    let chart = Chart::indexed(2);
    let f = ForceForm::General(
        CovectorField::from_exprs(&chart, &[Expr::parse("x0_dot^2").unwrap(), Expr::constant(0.0)]).unwrap(),
    );
    let s = TangentState::new(vec![0.0, 0.0], vec![0.5, 0.3]);
    assert!(matches!(check_velocity_linear(&f, &s), Err(Error::NotVelocityLinear(_))));
}

#[test]
fn diagonal_two_form_entries_are_rejected() {
    assert!(TwoFormField::constant(3, &[(1, 1, 2.0)]).is_err());
}
