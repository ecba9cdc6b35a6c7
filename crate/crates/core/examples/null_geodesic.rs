//! Light-like motion in Minkowski space: T starts at zero and stays there.

use relmech::dynamics::{energy_along, geodesic_field, integrate, IntegratorConfig};
use relmech::geometry::{MetricField, TangentState};

fn main() {
    let d = geodesic_field(MetricField::minkowski(4));
    let s0 = TangentState::new(vec![0.0; 4], vec![1.0, 1.0, 0.0, 0.0]);
    let traj = integrate(&d, &s0, &IntegratorConfig::rk4(1e-3, 10_000)).unwrap();
    let energies = energy_along(&traj, d.metric()).unwrap();
    let worst = energies.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    println!("final state: q = {:?}, qdot = {:?}", traj.last().q, traj.last().qdot);
    println!("max |T| over {} samples: {worst:e}", energies.len());
}
