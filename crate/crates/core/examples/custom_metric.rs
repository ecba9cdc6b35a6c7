//! A metric given as a native closure instead of expressions; derivatives are
//! then taken by central differences. Here the round sphere in (theta, phi):
//! great circles conserve T.

use relmech::diagnostics::check_energy_conservation;
use relmech::dynamics::{geodesic_field, integrate, IntegratorConfig};
use relmech::geometry::{MetricField, TangentState};

fn main() {
    let sphere = MetricField::from_fn(2, "round sphere", |j, k, q| match (j, k) {
        (0, 0) => 1.0,
        (1, 1) => q[0].sin().powi(2),
        _ => 0.0,
    });
    let d = geodesic_field(sphere);
    // along the equator with a tilt, away from the poles
    let s0 = TangentState::new(vec![std::f64::consts::FRAC_PI_2, 0.0], vec![0.3, 1.0]);
    let traj = integrate(&d, &s0, &IntegratorConfig::rk4(1e-2, 2000)).unwrap();
    println!("end: theta = {:.6}, phi = {:.6}", traj.last().q[0], traj.last().q[1]);
    println!("{}", check_energy_conservation(&traj, d.metric(), 1e-8).unwrap());
}
