//! Reads the matrix of a velocity-linear force off basis velocities. For a
//! two-form force it is the two-form itself; for linear drag it is symmetric,
//! which rules out any two-form.

use relmech::diagnostics::check_two_form_characterization;
use relmech::expr::Expr;
use relmech::forces::{velocity_matrix, CovectorField, ForceForm, TwoFormField};
use relmech::geometry::{Chart, MetricField};

fn show(label: &str, f: &ForceForm, q: &[f64]) {
    let m = velocity_matrix(f, q).unwrap();
    println!("{label} at q = {q:?}:");
    for i in 0..m.dim() {
        println!("  {:?}", m.row(i));
    }
}

fn main() {
    let chart = Chart::indexed(3);
    let p = |s: &str| Expr::parse(s).unwrap();
    let phi2 = TwoFormField::from_exprs(&chart, &[(0, 1, p("1 + x2^2")), (1, 2, p("sin(x0)"))]).unwrap();
    let magnetic = ForceForm::from_two_form(phi2);
    let drag = ForceForm::General(CovectorField::from_exprs(&chart, &[p("x0_dot"), p("x1_dot"), p("x2_dot")]).unwrap());

    let q = [0.5, -0.2, 1.0];
    show("two-form force", &magnetic, &q);
    show("drag", &drag, &q);

    let grid: Vec<Vec<f64>> = (0..10).map(|k| vec![0.1 * k as f64, -0.05 * k as f64, 0.3]).collect();
    let metric = MetricField::euclidean(3);
    for (label, f) in [("two-form force", &magnetic), ("drag", &drag)] {
        println!("{label}: {}", check_two_form_characterization(f, &metric, &grid, 1e-12).unwrap());
    }
}
