use proptest::prelude::*;

use relmech::expr::Expr;
use relmech::geometry::{dotted_pairing, Chart, MetricField, TangentState};
use relmech::Error;

/// A curved, non-diagonal metric on three coordinates, positive definite on
/// the sampled box.
const ENTRIES: [(usize, usize, &str); 6] = [
    (0, 0, "2 + sin(x0)*x1"),
    (0, 1, "0.3*cos(x2)"),
    (0, 2, "0.1*x0*x1"),
    (1, 1, "1 + x0^2"),
    (1, 2, "0.2*exp(0.5*x2)"),
    (2, 2, "3 + 0.5*sin(x0 + x1)"),
];

fn symbolic() -> MetricField {
    let chart = Chart::indexed(3);
    let entries: Vec<_> = ENTRIES.iter().map(|(j, k, s)| (*j, *k, Expr::parse(s).unwrap())).collect();
    MetricField::from_exprs(&chart, &entries).unwrap()
}

/// The same metric through a native closure, so derivatives are numeric.
fn native() -> MetricField {
    MetricField::from_fn(3, "native", |j, k, q| match (j, k) {
        (0, 0) => 2.0 + q[0].sin() * q[1],
        (0, 1) => 0.3 * q[2].cos(),
        (0, 2) => 0.1 * q[0] * q[1],
        (1, 1) => 1.0 + q[0] * q[0],
        (1, 2) => 0.2 * (0.5 * q[2]).exp(),
        (2, 2) => 3.0 + 0.5 * (q[0] + q[1]).sin(),
        _ => unreachable!(),
    })
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 3)
}

fn state() -> impl Strategy<Value = TangentState> {
    (point(), prop::collection::vec(-2.0f64..2.0, 3)).prop_map(|(q, v)| TangentState::new(q, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn inverse_times_metric_is_identity(q in point()) {
        let me = symbolic().eval(&q).unwrap();
        let prod = me.g.mul(&me.g_inv);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((prod[(i, j)] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn symbolic_and_numeric_derivatives_agree(q in point()) {
        let a = symbolic().eval(&q).unwrap();
        let b = native().eval(&q).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let (s, n) = (a.dg(i, j, k), b.dg(i, j, k));
                    prop_assert!((s - n).abs() <= 1e-5 * s.abs().max(1.0), "dg({i},{j},{k}): {s} vs {n}");
                }
            }
        }
    }

    #[test]
    fn christoffel_lower_indices_are_symmetric(q in point()) {
        let gamma = symbolic().eval(&q).unwrap().christoffel();
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(gamma.get(l, i, j), gamma.get(l, j, i));
                }
            }
        }
    }

    #[test]
    fn theta_dot_is_twice_kinetic_energy(s in state()) {
        let me = symbolic().eval(&s.q).unwrap();
        let t = me.kinetic_energy(&s).unwrap();
        let theta_dot = dotted_pairing(&me.momentum(&s).unwrap(), &s).unwrap();
        prop_assert!((theta_dot - 2.0 * t).abs() <= 1e-12 * t.abs().max(1.0));
    }

    #[test]
    fn christoffel_matches_definition(q in point()) {
        // ½ g^lk (∂i g_jk + ∂j g_ik − ∂k g_ij), summed by brute force
        let me = symbolic().eval(&q).unwrap();
        let gamma = me.christoffel();
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let oracle: f64 = (0..3)
                        .map(|k| 0.5 * me.g_inv[(l, k)] * (me.dg(i, j, k) + me.dg(j, i, k) - me.dg(k, i, j)))
                        .sum();
                    prop_assert!((gamma.get(l, i, j) - oracle).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn flat_metrics_have_no_connection() {
    for m in [MetricField::euclidean(4), MetricField::minkowski(4)] {
        let gamma = m.eval(&[0.3, -1.0, 2.0, 5.0]).unwrap().christoffel();
        assert_eq!(gamma.max_abs(), 0.0);
    }
}

#[test]
fn euclidean_energy_and_momentum() {
    let s = TangentState::new(vec![0.0, 0.0], vec![3.0, 4.0]);
    let me = MetricField::euclidean(2).eval(&s.q).unwrap();
    assert_eq!(me.kinetic_energy(&s).unwrap(), 12.5);
    assert_eq!(me.momentum(&s).unwrap().0, vec![3.0, 4.0]);
}

#[test]
fn null_vector_has_zero_energy() {
    let s = TangentState::new(vec![0.0; 4], vec![1.0, 1.0, 0.0, 0.0]);
    assert_eq!(MetricField::minkowski(4).eval(&s.q).unwrap().kinetic_energy(&s).unwrap(), 0.0);
}

#[test]
fn polar_metric_degenerates_at_origin() {
    assert!(matches!(MetricField::polar().eval(&[0.0, 1.0]), Err(Error::SingularMetric { .. })));
}

#[test]
fn chart_rejects_collisions() {
    assert!(Chart::new(&["x", "x"]).is_err());
    assert!(Chart::new(&["x", "x_dot"]).is_err());
    assert!(Chart::new(&["1x"]).is_err());
}
