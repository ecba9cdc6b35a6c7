//! A geodesic in polar coordinates is a straight line. Starting at r = 1 with
//! unit angular speed it is x = 1, i.e. r = sqrt(1 + t^2), theta = atan t.

use relmech::dynamics::{geodesic_field, integrate, IntegratorConfig};
use relmech::geometry::{MetricField, TangentState};

fn main() {
    let d = geodesic_field(MetricField::polar());
    let s0 = TangentState::new(vec![1.0, 0.0], vec![0.0, 1.0]);
    let traj = integrate(&d, &s0, &IntegratorConfig::rk4(1e-3, 1000)).unwrap();

    println!("{:>6} {:>12} {:>12} {:>12}", "t", "r", "theta", "error");
    for sample in traj.samples.iter().step_by(200) {
        let t = sample.t;
        let q = &sample.state.q;
        let err = (q[0] - (1.0 + t * t).sqrt()).abs().max((q[1] - t.atan()).abs());
        println!("{t:>6.2} {:>12.8} {:>12.8} {err:>12.3e}", q[0], q[1]);
    }
}
