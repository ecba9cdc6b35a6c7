//! Executable checks over trajectories and work forms.
//!
//! Each check yields a [`DiagnosticReport`] whose verdict is `pass` exactly
//! when the measured value is within the threshold. The contact/conservation
//! equivalence is witnessed by running both one-sided tests and comparing
//! verdicts; a sampled contact test cannot prove a universal statement, and
//! the reports say which parts are exact certificates and which are samples.
//!
//! Energy drift is measured relative to `max(1, |T(0)|)` so null trajectories
//! with `T(0) = 0` do not divide by zero.

use std::fmt;
use std::thread;

use crate::dynamics::{assemble_sode, energy_along, integrate, IntegratorConfig, Trajectory};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::forces::{
    check_velocity_linear, endomorphism, is_contact, ContactTolerance, CovectorField, ForceForm,
    Potential, StateSampler, TwoFormField,
};
use crate::geometry::{Chart, MetricField, TangentState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticReport {
    pub check: String,
    pub verdict: Verdict,
    pub measured: f64,
    pub threshold: f64,
    /// Samples or trajectory points examined.
    pub examined: usize,
    pub seed: Option<u64>,
    pub notes: Vec<String>,
}

impl DiagnosticReport {
    pub fn new(check: impl Into<String>, measured: f64, threshold: f64, examined: usize) -> Self {
        DiagnosticReport {
            check: check.into(),
            // NaN never passes
            verdict: Verdict::from_bool(measured <= threshold),
            measured,
            threshold,
            examined,
            seed: None,
            notes: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

impl fmt::Display for DiagnosticReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (measured {:.6e}, threshold {:.6e}, examined {}",
            self.check, self.verdict, self.measured, self.threshold, self.examined
        )?;
        if let Some(seed) = self.seed {
            write!(f, ", seed {seed}")?;
        }
        f.write_str(")")?;
        for n in &self.notes {
            write!(f, "\n    {n}")?;
        }
        Ok(())
    }
}

fn relative_drift(values: &[f64]) -> f64 {
    let first = values[0];
    let scale = first.abs().max(1.0);
    values.iter().fold(0.0f64, |m, v| m.max((v - first).abs())) / scale
}

/// `max |T(tᵢ) − T(0)| / max(1, |T(0)|)` against `tol`.
pub fn check_energy_conservation(t: &Trajectory, m: &MetricField, tol: f64) -> Result<DiagnosticReport> {
    if t.is_empty() {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    }
    let energies = energy_along(t, m)?;
    Ok(
        DiagnosticReport::new("energy_conservation", relative_drift(&energies), tol, energies.len())
            .note(format!("T(0) = {:.17e}", energies[0])),
    )
}

/// Relative drift of `T + U` for a trajectory driven by `α = dU`.
pub fn check_total_energy(t: &Trajectory, m: &MetricField, u: &Potential, tol: f64) -> Result<DiagnosticReport> {
    if t.is_empty() {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    }
    let kinetic = energy_along(t, m)?;
    let total = t
        .states()
        .zip(&kinetic)
        .map(|(s, k)| Ok(k + u.value(&s.q)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(
        DiagnosticReport::new("total_energy", relative_drift(&total), tol, total.len())
            .note(format!("T(0) + U(0) = {:.17e}", total[0])),
    )
}

/// Sampled contact test as a report. The measured value is the residual
/// selected by `tolerance`.
pub fn check_contact(
    f: &ForceForm,
    sampler: &StateSampler,
    n_samples: usize,
    tolerance: ContactTolerance,
) -> Result<DiagnosticReport> {
    let mut sampler = sampler.clone();
    let v = is_contact(f, &mut sampler, n_samples, tolerance)?;
    let mode = match tolerance {
        ContactTolerance::Absolute(_) => "absolute",
        ContactTolerance::Normalized(_) => "normalized",
    };
    let mut report = DiagnosticReport::new("contact", v.measured(), tolerance.value(), n_samples)
        .with_seed(v.seed)
        .note(format!(
            "{mode} residual; max |alpha_dot| = {:.3e}, max normalized = {:.3e}",
            v.max_abs_residual, v.max_normalized_residual
        ));
    report = match v.certificate {
        Some(c) => report.note(format!("exact certificate: {c:?}")),
        None if v.holds => report.note("sampled evidence only, not a proof"),
        None => report.note("a sample with nonzero alpha_dot certifies the form is not contact"),
    };
    Ok(report)
}

/// Parameters shared by the contact and conservation halves of the criterion.
#[derive(Debug, Clone)]
pub struct CriterioParams {
    pub sampler: StateSampler,
    pub n_samples: usize,
    pub contact_tolerance: ContactTolerance,
    pub initial: TangentState,
    pub integrator: IntegratorConfig,
    pub energy_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterioReport {
    pub contact: DiagnosticReport,
    pub energy: DiagnosticReport,
}

impl CriterioReport {
    /// Both halves pass or both fail.
    pub fn agree(&self) -> bool {
        self.contact.verdict == self.energy.verdict
    }

    /// Common verdict, or `None` when the halves disagree.
    pub fn verdict(&self) -> Option<Verdict> {
        self.agree().then_some(self.energy.verdict)
    }
}

impl fmt::Display for CriterioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "criterio: {}", if self.agree() { "halves agree" } else { "HALVES DISAGREE" })?;
        writeln!(f, "  {}", self.contact.to_string().replace('\n', "\n  "))?;
        write!(f, "  {}", self.energy.to_string().replace('\n', "\n  "))
    }
}

/// Runs the metric-free contact test and the energy-conservation test on the
/// same system and reports both.
pub fn check_criterio(f: &ForceForm, m: &MetricField, p: &CriterioParams) -> Result<CriterioReport> {
    let contact = check_contact(f, &p.sampler, p.n_samples, p.contact_tolerance)?;
    let sode = assemble_sode(m.clone(), f.clone())?;
    let traj = integrate(&sode, &p.initial, &p.integrator)?;
    let energy = check_energy_conservation(&traj, m, p.energy_tolerance)?;
    Ok(CriterioReport { contact, energy })
}

/// Integrates the same work form under several metrics and checks that each
/// run conserves its own kinetic energy. The work form must be contact.
pub fn check_metric_independence(f: &ForceForm, metrics: &[MetricField], p: &CriterioParams) -> Result<DiagnosticReport> {
    if metrics.len() < 2 {
        return Err(Error::Precondition("at least two metrics are required".into()));
    }
    let contact = check_contact(f, &p.sampler, p.n_samples, p.contact_tolerance)?;
    if !contact.passed() {
        return Err(Error::Precondition(format!(
            "work form is not contact (residual {:.3e} > {:.3e})",
            contact.measured, contact.threshold
        )));
    }
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    let mut examined = 0;
    for m in metrics {
        let sode = assemble_sode(m.clone(), f.clone())?;
        let traj = integrate(&sode, &p.initial, &p.integrator)?;
        let r = check_energy_conservation(&traj, m, p.energy_tolerance)?;
        worst = worst.max(r.measured);
        examined += r.examined;
        notes.push(format!("{}: drift {:.3e}", m.label(), r.measured));
    }
    let mut report = DiagnosticReport::new("metric_independence", worst, p.energy_tolerance, examined)
        .with_seed(p.sampler.seed());
    report.notes = notes;
    Ok(report)
}

/// Probe velocity used at each grid point of the characterization check.
fn probe_velocity(n: usize, k: usize) -> Vec<f64> {
    (0..n)
        .map(|i| ((k as f64 + 1.0) * 0.618_033_988_75 * (i as f64 + 1.0)).sin() + 0.1)
        .collect()
}

/// Reads the matrix `Mᵢⱼ = αⱼ(q, eᵢ)` of a velocity-linear work form at each
/// grid point. Passes when every `M` is antisymmetric, i.e. the form is a
/// two-form force: `α̇ = q̇ᵀ sym(M) q̇` vanishes identically exactly then.
/// The measured value is the largest `|sym(M)|_F / |M|_F`.
pub fn check_two_form_characterization(
    f: &ForceForm,
    m: &MetricField,
    q_grid: &[Vec<f64>],
    tol: f64,
) -> Result<DiagnosticReport> {
    if q_grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    let mut worst_sym = 0.0f64;
    let mut worst_skew = 0.0f64;
    for (k, q) in q_grid.iter().enumerate() {
        let probe = TangentState::new(q.clone(), probe_velocity(q.len(), k));
        let matrix = check_velocity_linear(f, &probe)?;
        let norm = matrix.frobenius();
        if norm > 0.0 {
            worst_sym = worst_sym.max(matrix.symmetric_part().frobenius() / norm);
        }
        // skew-adjointness of the endomorphism built from the antisymmetric part
        let me = m.eval(q)?;
        let phi2 = TwoFormField::from_matrix(&matrix.antisymmetric_part())?;
        let e = endomorphism(&phi2, &me, q)?;
        let v = &probe.qdot;
        let w = e.apply(v);
        let scale = w.iter().map(|x| x * x).sum::<f64>().sqrt() * v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if scale > 0.0 {
            worst_skew = worst_skew.max(me.inner(&w, v).abs() / (scale * me.g.max_abs()));
        }
    }
    Ok(
        DiagnosticReport::new("two_form_characterization", worst_sym, tol, q_grid.len())
            .note(format!("max relative T2(Phi v, v) of the antisymmetric part: {worst_skew:.3e}"))
            .note("measured = max |sym(M)|_F / |M|_F; contact iff sym(M) = 0 for linear forms"),
    )
}

/// Cell of the force × metric matrix.
#[derive(Debug, Clone)]
pub struct MatrixCell {
    pub force: String,
    pub metric: String,
    pub report: CriterioReport,
}

/// The builtin force × metric matrix used to witness the criterion.
#[derive(Debug, Clone)]
pub struct ScenarioMatrix {
    pub forces: Vec<(String, ForceForm)>,
    pub metrics: Vec<(String, MetricField)>,
    pub params: CriterioParams,
    /// Forces expected to be contact (and conserve energy).
    pub expected_contact: Vec<String>,
}

/// Contact threshold of the matrix, on `|α̇| / (|α| |q̇|)`.
pub const MATRIX_CONTACT_TOL: f64 = 1e-12;
/// Energy threshold of the matrix, relative drift.
pub const MATRIX_ENERGY_TOL: f64 = 1e-7;

/// Five work forms on a three-dimensional chart (zero, uniform two-form,
/// position-dependent two-form, harmonic potential, symmetric drag) against
/// three metrics (Euclidean, Minkowski with `x0` time-like, conformally flat).
/// Both two-forms act in the `x1`, `x2` plane.
pub fn builtin_matrix(seed: u64) -> ScenarioMatrix {
    let chart = Chart::indexed(3);
    let parse = |s: &str| Expr::parse(s).expect("builtin expression");
    let uniform = TwoFormField::constant(3, &[(1, 2, 1.0)]).expect("valid two-form");
    let varying = TwoFormField::from_exprs(&chart, &[(1, 2, parse("1 + 0.5*sin(x0 + x1)"))]).expect("valid two-form");
    let harmonic = Potential::from_expr(&chart, &parse("0.5*(x0^2 + x1^2 + x2^2)")).expect("valid potential");
    let drag = CovectorField::from_exprs(&chart, &[parse("x0_dot"), parse("x1_dot"), parse("x2_dot")])
        .expect("valid covector");
    let forces = vec![
        ("zero".to_string(), ForceForm::zero(3)),
        ("two-form-uniform".to_string(), ForceForm::from_two_form(uniform)),
        ("two-form-varying".to_string(), ForceForm::from_two_form(varying)),
        ("harmonic-potential".to_string(), ForceForm::from_potential(harmonic)),
        ("drag-symmetric".to_string(), ForceForm::General(drag)),
    ];
    let metrics = vec![
        ("euclidean".to_string(), MetricField::euclidean(3)),
        ("minkowski".to_string(), MetricField::minkowski(3)),
        ("conformal".to_string(), MetricField::conformal(&chart, 0.1)),
    ];
    ScenarioMatrix {
        forces,
        metrics,
        params: CriterioParams {
            sampler: StateSampler::cube(3, 1.0, seed),
            n_samples: 1000,
            contact_tolerance: ContactTolerance::Normalized(MATRIX_CONTACT_TOL),
            initial: TangentState::new(vec![0.2, -0.1, 0.3], vec![0.4, 0.7, -0.5]),
            integrator: IntegratorConfig::rk4(1e-3, 10_000),
            energy_tolerance: MATRIX_ENERGY_TOL,
        },
        expected_contact: vec!["zero".into(), "two-form-uniform".into(), "two-form-varying".into()],
    }
}

impl ScenarioMatrix {
    /// Runs every cell, on up to `jobs` threads. Output order is row-major
    /// (force, then metric) regardless of `jobs`.
    pub fn run(&self, jobs: usize) -> Result<Vec<MatrixCell>> {
        let cells: Vec<(usize, usize)> = (0..self.forces.len())
            .flat_map(|i| (0..self.metrics.len()).map(move |j| (i, j)))
            .collect();
        let run_cell = |&(i, j): &(usize, usize)| -> Result<MatrixCell> {
            let (fname, force) = &self.forces[i];
            let (mname, metric) = &self.metrics[j];
            Ok(MatrixCell {
                force: fname.clone(),
                metric: mname.clone(),
                report: check_criterio(force, metric, &self.params)?,
            })
        };
        let jobs = jobs.max(1);
        if jobs == 1 {
            return cells.iter().map(run_cell).collect();
        }
        let chunk = cells.len().div_ceil(jobs);
        thread::scope(|scope| {
            let handles: Vec<_> = cells
                .chunks(chunk.max(1))
                .map(|part| scope.spawn(move || part.iter().map(run_cell).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("matrix worker panicked"))
                .collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::geodesic_field;

    #[test]
    fn verdict_follows_threshold() {
        assert!(DiagnosticReport::new("x", 1.0, 1.0, 1).passed());
        assert!(!DiagnosticReport::new("x", 1.1, 1.0, 1).passed());
        assert!(!DiagnosticReport::new("x", f64::NAN, 1.0, 1).passed());
    }

    #[test]
    fn rest_state_conserves_trivially() {
        let d = geodesic_field(MetricField::euclidean(2));
        let t = integrate(&d, &TangentState::new(vec![1.0, 1.0], vec![0.0, 0.0]), &IntegratorConfig::rk4(0.1, 5)).unwrap();
        let r = check_energy_conservation(&t, d.metric(), 1e-8).unwrap();
        assert!(r.passed());
        assert_eq!(r.measured, 0.0);
    }

    #[test]
    fn relative_drift_uses_unit_floor() {
        assert_eq!(relative_drift(&[0.0, 0.25, -0.5]), 0.5);
        assert_eq!(relative_drift(&[4.0, 5.0]), 0.25);
    }
}
