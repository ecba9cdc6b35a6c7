//! The same two-form force conserves kinetic energy for every metric: here
//! Euclidean space and Minkowski space, with x0 as time.

use relmech::diagnostics::{check_metric_independence, CriterioParams};
use relmech::dynamics::IntegratorConfig;
use relmech::forces::{ContactTolerance, ForceForm, StateSampler, TwoFormField};
use relmech::geometry::{MetricField, TangentState};

fn main() {
    let force = ForceForm::from_two_form(TwoFormField::constant(4, &[(1, 2, 1.0)]).unwrap());
    let metrics = [
        MetricField::euclidean(4).with_label("euclidean"),
        MetricField::minkowski(4).with_label("minkowski"),
    ];
    let params = CriterioParams {
        sampler: StateSampler::cube(4, 1.0, 5),
        n_samples: 1000,
        contact_tolerance: ContactTolerance::Normalized(1e-12),
        initial: TangentState::new(vec![0.0; 4], vec![1.0, 0.6, -0.3, 0.2]),
        integrator: IntegratorConfig::rk4(1e-3, 10_000),
        energy_tolerance: 1e-8,
    };
    println!("{}", check_metric_independence(&force, &metrics, &params).unwrap());
}
