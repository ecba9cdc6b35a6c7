//! A charge in a uniform magnetic field. The force comes from the two-form
//! `B dx^dy`, so it does no work: the speed, and hence T, stays constant while
//! the particle runs around a circle.

use std::f64::consts::PI;

use relmech::diagnostics::check_energy_conservation;
use relmech::dynamics::{assemble_sode, integrate, IntegratorConfig};
use relmech::forces::{ForceForm, TwoFormField};
use relmech::geometry::{MetricField, TangentState};

fn main() {
    let b = 1.0;
    let force = ForceForm::from_two_form(TwoFormField::constant(3, &[(0, 1, b)]).unwrap());
    let d = assemble_sode(MetricField::euclidean(3), force).unwrap();
    let s0 = TangentState::new(vec![0.0; 3], vec![1.0, 0.0, 0.0]);

    let n = 6283;
    let traj = integrate(&d, &s0, &IntegratorConfig::rk4(2.0 * PI / n as f64, n)).unwrap();
    let end = traj.last();
    println!("after one period: q = {:?}", end.q);
    println!("closed form:      q = [0, 0, 0] (circle (sin t, cos t - 1, 0))");

    let long = integrate(&d, &s0, &IntegratorConfig::rk4(1e-3, 100_000)).unwrap();
    println!("{}", check_energy_conservation(&long, d.metric(), 1e-8).unwrap());
}
