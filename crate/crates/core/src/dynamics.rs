//! Equations of motion and their integration.
//!
//! The metric and the work form determine the second-order equation
//! `q̈ˡ = −(gˡᵏαₖ + Γˡᵢⱼ q̇ⁱq̇ʲ)`. With `α = 0` this is the geodesic field; the
//! difference between the two is the covariant value `D^∇ = −gˡᵏαₖ ∂/∂qˡ`.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, Error, Result};
use crate::forces::ForceForm;
use crate::geometry::{MetricField, TangentState};

/// A second-order differential equation assembled from a metric and a work form.
#[derive(Debug, Clone)]
pub struct SodeField {
    metric: MetricField,
    force: ForceForm,
}

impl SodeField {
    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn force(&self) -> &ForceForm {
        &self.force
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// `q̈ˡ(q, q̇)`.
    pub fn acceleration(&self, s: &TangentState) -> Result<Vec<f64>> {
        check_dim("state", self.dim(), s.dim())?;
        let me = self.metric.eval(&s.q)?;
        let quadratic = me.christoffel().contract(&s.qdot);
        let mut acc = match &self.force {
            ForceForm::Zero { .. } => vec![0.0; self.dim()],
            f => me.raise(&f.eval(s)?),
        };
        for (a, g) in acc.iter_mut().zip(&quadratic) {
            *a = -(*a + g);
        }
        Ok(acc)
    }
}

/// Assembles `D` from `(T₂, α)`.
pub fn assemble_sode(metric: MetricField, force: ForceForm) -> Result<SodeField> {
    check_dim("work form", metric.dim(), force.dim())?;
    Ok(SodeField { metric, force })
}

/// The geodesic field `D_G`: the equation with `α = 0`.
pub fn geodesic_field(metric: MetricField) -> SodeField {
    let n = metric.dim();
    SodeField {
        metric,
        force: ForceForm::zero(n),
    }
}

/// `D^∇` at a state: a tangent vector at the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariantValue(pub Vec<f64>);

/// `D^∇ = −gˡᵏαₖ`, which equals the acceleration of `D` minus that of `D_G`.
pub fn covariant_value(metric: &MetricField, force: &ForceForm, s: &TangentState) -> Result<CovariantValue> {
    check_dim("work form", metric.dim(), force.dim())?;
    let me = metric.eval(&s.q)?;
    let alpha = force.eval(s)?;
    Ok(CovariantValue(me.raise(&alpha).into_iter().map(|x| -x).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Rk4,
    /// Explicit Euler. Only first order; kept for comparison.
    Euler,
    /// Position Verlet step with a trapezoidal velocity update that uses a
    /// predicted velocity, so velocity-dependent forces are admissible.
    VelocityVerlet,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::Euler => "euler",
            Method::VelocityVerlet => "velocity-verlet",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Method::Rk4),
            "euler" => Ok(Method::Euler),
            "velocity-verlet" | "verlet" => Ok(Method::VelocityVerlet),
            other => Err(Error::InvalidArgument(format!(
                "unknown integration method `{other}` (expected rk4, euler or velocity-verlet)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub h: f64,
    pub steps: usize,
    /// After each step, rescale `q̇` so the kinetic energy equals its initial
    /// value. This is a constraint-restoration device and hides drift; it is
    /// off unless asked for.
    pub project_energy: bool,
}

impl IntegratorConfig {
    pub fn rk4(h: f64, steps: usize) -> Self {
        IntegratorConfig {
            method: Method::Rk4,
            h,
            steps,
            project_energy: false,
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: TangentState,
}

/// Fixed-step solution samples; `samples[i].t = i * h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub h: f64,
    pub method: Method,
}

impl Trajectory {
    pub fn initial(&self) -> &TangentState {
        &self.samples[0].state
    }

    pub fn last(&self) -> &TangentState {
        &self.samples[self.samples.len() - 1].state
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = &TangentState> {
        self.samples.iter().map(|s| &s.state)
    }
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    y.iter().zip(x).map(|(y, x)| y + a * x).collect()
}

fn step(d: &SodeField, s: &TangentState, h: f64, method: Method) -> Result<TangentState> {
    let (q, v) = (&s.q, &s.qdot);
    match method {
        Method::Euler => {
            let a = d.acceleration(s)?;
            Ok(TangentState::new(axpy(h, v, q), axpy(h, &a, v)))
        }
        Method::VelocityVerlet => {
            let a0 = d.acceleration(s)?;
            let q1: Vec<f64> = (0..q.len())
                .map(|i| q[i] + h * v[i] + 0.5 * h * h * a0[i])
                .collect();
            let v_pred = axpy(h, &a0, v);
            let a1 = d.acceleration(&TangentState::new(q1.clone(), v_pred))?;
            let v1 = (0..v.len()).map(|i| v[i] + 0.5 * h * (a0[i] + a1[i])).collect();
            Ok(TangentState::new(q1, v1))
        }
        Method::Rk4 => {
            let k1v = d.acceleration(s)?;
            let k1q = v.clone();
            let s2 = TangentState::new(axpy(0.5 * h, &k1q, q), axpy(0.5 * h, &k1v, v));
            let k2v = d.acceleration(&s2)?;
            let k2q = s2.qdot;
            let s3 = TangentState::new(axpy(0.5 * h, &k2q, q), axpy(0.5 * h, &k2v, v));
            let k3v = d.acceleration(&s3)?;
            let k3q = s3.qdot;
            let s4 = TangentState::new(axpy(h, &k3q, q), axpy(h, &k3v, v));
            let k4v = d.acceleration(&s4)?;
            let k4q = s4.qdot;
            let combine = |y: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
                (0..y.len())
                    .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                    .collect()
            };
            Ok(TangentState::new(
                combine(q, &k1q, &k2q, &k3q, &k4q),
                combine(v, &k1v, &k2v, &k3v, &k4v),
            ))
        }
    }
}

fn project(d: &SodeField, s: &mut TangentState, target: f64) -> Result<()> {
    let t = d.metric().eval(&s.q)?.kinetic_energy(s)?;
    if t != 0.0 && target != 0.0 && t.signum() == target.signum() {
        let factor = (target / t).sqrt();
        s.qdot.iter_mut().for_each(|v| *v *= factor);
    }
    Ok(())
}

/// Advances `s0` by `steps` fixed steps of size `h`.
///
/// Any evaluation failure aborts the run with the failing step number and the
/// last good state.
pub fn integrate(d: &SodeField, s0: &TangentState, config: &IntegratorConfig) -> Result<Trajectory> {
    let IntegratorConfig {
        method,
        h,
        steps,
        project_energy,
    } = *config;
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {h}")));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("at least one step is required".into()));
    }
    check_dim("initial state", d.dim(), s0.dim())?;

    let wrap = |k: usize, last: &TangentState, e: Error| Error::Step {
        step: k,
        t: k as f64 * h,
        last_good: Box::new(last.clone()),
        source: Box::new(e),
    };

    let target = if project_energy {
        Some(
            d.metric()
                .eval(&s0.q)
                .and_then(|me| me.kinetic_energy(s0))
                .map_err(|e| wrap(0, s0, e))?,
        )
    } else {
        None
    };

    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(Sample {
        t: 0.0,
        state: s0.clone(),
    });
    let mut current = s0.clone();
    for k in 1..=steps {
        let mut next = step(d, &current, h, method).map_err(|e| wrap(k, &current, e))?;
        if let Some(target) = target {
            project(d, &mut next, target).map_err(|e| wrap(k, &current, e))?;
        }
        if next.q.iter().chain(&next.qdot).any(|x| !x.is_finite()) {
            return Err(wrap(
                k,
                &current,
                Error::InvalidArgument("state became non-finite".into()),
            ));
        }
        samples.push(Sample {
            t: k as f64 * h,
            state: next.clone(),
        });
        current = next;
    }
    Ok(Trajectory { samples, h, method })
}

/// Kinetic energy at each sample.
pub fn energy_along(t: &Trajectory, metric: &MetricField) -> Result<Vec<f64>> {
    t.states()
        .map(|s| metric.eval(&s.q)?.kinetic_energy(s))
        .collect()
}
