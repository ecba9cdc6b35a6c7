use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use crate::diagnostics::{
    check_contact, check_energy_conservation, check_total_energy, check_two_form_characterization,
    DiagnosticReport, Verdict,
};
use crate::dynamics::{assemble_sode, integrate, Trajectory};
use crate::error::Error;
use crate::forces::{ContactTolerance, ForceForm};

use super::{CheckSpec, Scenario, ScenarioError, FORMAT_VERSION};

/// Process exit status of a run or batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    /// Every check matched its expected verdict.
    Matched = 0,
    Mismatch = 1,
    /// Usage, IO, parse or evaluation error.
    Error = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// The two halves of a criterio check disagree.
    Mismatch,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Mismatch => "mismatch",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: String,
    pub measured: f64,
    pub threshold: f64,
    pub outcome: Outcome,
    pub expected: Verdict,
    pub reports: Vec<DiagnosticReport>,
}

impl CheckOutcome {
    fn single(r: DiagnosticReport, expected: Verdict) -> Self {
        CheckOutcome {
            check: r.check.clone(),
            measured: r.measured,
            threshold: r.threshold,
            outcome: if r.passed() { Outcome::Pass } else { Outcome::Fail },
            expected,
            reports: vec![r],
        }
    }

    pub fn matched(&self) -> bool {
        match self.outcome {
            Outcome::Pass => self.expected == Verdict::Pass,
            Outcome::Fail => self.expected == Verdict::Fail,
            Outcome::Mismatch => false,
        }
    }
}

/// Result of running a scenario's checks.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub trajectory: Option<Trajectory>,
    pub outcomes: Vec<CheckOutcome>,
    pub seed: u64,
}

impl Evaluation {
    pub fn status(&self) -> ExitStatus {
        if self.outcomes.iter().all(CheckOutcome::matched) {
            ExitStatus::Matched
        } else {
            ExitStatus::Mismatch
        }
    }
}

fn run_err(s: &Scenario, e: Error) -> ScenarioError {
    ScenarioError::Run {
        origin: s.name.clone(),
        source: e,
    }
}

/// Runs every check of `s`. `seed` overrides the sampling seed. The
/// trajectory is integrated when a check needs it or `keep_trajectory` is set.
pub fn evaluate(s: &Scenario, seed: Option<u64>, keep_trajectory: bool) -> Result<Evaluation, ScenarioError> {
    let mut sampling = s.sampling.clone();
    if let Some(seed) = seed {
        sampling.seed = seed;
    }
    let sampler = sampling.sampler().map_err(|e| run_err(s, e))?;
    let trajectory = if keep_trajectory || s.checks.iter().any(CheckSpec::needs_trajectory) {
        let sode = assemble_sode(s.metric.clone(), s.force.clone()).map_err(|e| run_err(s, e))?;
        Some(integrate(&sode, &s.initial, &s.integrator).map_err(|e| run_err(s, e))?)
    } else {
        None
    };
    let traj = || trajectory.as_ref().expect("trajectory integrated");
    let mut outcomes = Vec::new();
    for check in &s.checks {
        let outcome = match *check {
            CheckSpec::EnergyConservation { tol } => {
                let r = check_energy_conservation(traj(), &s.metric, tol).map_err(|e| run_err(s, e))?;
                CheckOutcome::single(r, s.expect)
            }
            CheckSpec::TotalEnergy { tol } => {
                let ForceForm::Potential(u) = &s.force else {
                    unreachable!("validated: total_energy needs a potential");
                };
                let r = check_total_energy(traj(), &s.metric, u, tol).map_err(|e| run_err(s, e))?;
                CheckOutcome::single(r, s.expect)
            }
            CheckSpec::Contact { tol } => {
                let r = check_contact(&s.force, &sampler, sampling.samples, ContactTolerance::Normalized(tol))
                    .map_err(|e| run_err(s, e))?;
                CheckOutcome::single(r, s.expect)
            }
            CheckSpec::Criterio { contact_tol, energy_tol } => {
                let contact = check_contact(
                    &s.force,
                    &sampler,
                    sampling.samples,
                    ContactTolerance::Normalized(contact_tol),
                )
                .map_err(|e| run_err(s, e))?;
                let energy = check_energy_conservation(traj(), &s.metric, energy_tol).map_err(|e| run_err(s, e))?;
                let outcome = match (contact.passed(), energy.passed()) {
                    (true, true) => Outcome::Pass,
                    (false, false) => Outcome::Fail,
                    _ => Outcome::Mismatch,
                };
                CheckOutcome {
                    check: "criterio".into(),
                    measured: energy.measured,
                    threshold: energy.threshold,
                    outcome,
                    expected: s.expect,
                    reports: vec![contact, energy],
                }
            }
            CheckSpec::TwoFormCharacterization { tol } => {
                let mut sampler = sampler.clone();
                let grid: Vec<Vec<f64>> = (0..sampling.samples.min(200)).map(|_| sampler.sample().q).collect();
                let r = match check_two_form_characterization(&s.force, &s.metric, &grid, tol) {
                    Ok(r) => r,
                    Err(Error::NotVelocityLinear(why)) => {
                        DiagnosticReport::new("two_form_characterization", f64::INFINITY, tol, grid.len())
                            .note(format!("not a two-form force: {why}"))
                    }
                    Err(e) => return Err(run_err(s, e)),
                };
                CheckOutcome::single(r.with_seed(sampling.seed), s.expect)
            }
        };
        outcomes.push(outcome);
    }
    Ok(Evaluation {
        trajectory,
        outcomes,
        seed: sampling.seed,
    })
}

/// Files written by [`run`].
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub evaluation: Evaluation,
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn status(&self) -> ExitStatus {
        self.evaluation.status()
    }
}

fn io_err(path: &Path, e: std::io::Error) -> ScenarioError {
    ScenarioError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Evaluates `s` and writes the requested outputs into `out_dir/<name>/`.
pub fn run(s: &Scenario, out_dir: &Path, seed: Option<u64>) -> Result<RunSummary, ScenarioError> {
    let dir = out_dir.join(&s.name);
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let evaluation = evaluate(s, seed, s.outputs.trajectory)?;
    let mut files = Vec::new();
    if let (true, Some(t)) = (s.outputs.trajectory, &evaluation.trajectory) {
        let path = dir.join("trajectory.csv");
        write_trajectory(&path, s, t)?;
        files.push(path);
    }
    if s.outputs.report {
        let path = dir.join("report.txt");
        fs::write(&path, render_report(s, &evaluation)).map_err(|e| io_err(&path, e))?;
        files.push(path);
    }
    if s.outputs.summary {
        let path = dir.join("summary.txt");
        fs::write(&path, render_summary(s, &evaluation)).map_err(|e| io_err(&path, e))?;
        files.push(path);
    }
    Ok(RunSummary { evaluation, dir, files })
}

/// Column names: `t, q..., qdot..., T, theta_dot, alpha_dot`.
fn trajectory_columns(s: &Scenario) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    cols.extend(s.chart.coordinates().iter().cloned());
    cols.extend(s.chart.velocities().iter().cloned());
    cols.extend(["T", "theta_dot", "alpha_dot"].map(String::from));
    cols
}

/// Writes one comma-separated row per sample with 17 significant digits.
pub fn write_trajectory(path: &Path, s: &Scenario, t: &Trajectory) -> Result<(), ScenarioError> {
    let mut out = trajectory_columns(s).join(",");
    out.push('\n');
    for sample in &t.samples {
        let st = &sample.state;
        let me = s.metric.eval(&st.q).map_err(|e| run_err(s, e))?;
        let kinetic = me.kinetic_energy(st).map_err(|e| run_err(s, e))?;
        let alpha_dot = s.force.contact_residual(st).map_err(|e| run_err(s, e))?;
        let row = std::iter::once(sample.t)
            .chain(st.q.iter().copied())
            .chain(st.qdot.iter().copied())
            .chain([kinetic, 2.0 * kinetic, alpha_dot]);
        let cells: Vec<String> = row.map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// A trajectory file read back as numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TrajectoryTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn read_trajectory(path: &Path) -> Result<TrajectoryTable, ScenarioError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let invalid = |line: usize, message: String| ScenarioError::Invalid {
        origin: path.display().to_string(),
        issues: vec![super::Issue {
            line: Some(line),
            message,
        }],
    };
    let mut lines = text.lines().enumerate();
    let columns: Vec<String> = match lines.next() {
        Some((_, h)) => h.split(',').map(str::to_string).collect(),
        None => return Err(invalid(1, "missing header row".into())),
    };
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let row = line
            .split(',')
            .map(|c| c.parse::<f64>().map_err(|_| invalid(idx + 1, format!("not a number: {c:?}"))))
            .collect::<Result<Vec<f64>, _>>()?;
        if row.len() != columns.len() {
            return Err(invalid(
                idx + 1,
                format!("expected {} columns, found {}", columns.len(), row.len()),
            ));
        }
        rows.push(row);
    }
    Ok(TrajectoryTable { columns, rows })
}

/// Plain-text report.
pub fn render_report(s: &Scenario, e: &Evaluation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", s.name);
    if !s.description.is_empty() {
        let _ = writeln!(out, "description: {}", s.description);
    }
    let _ = writeln!(out, "configuration space: R^{} ({})", s.dim(), s.chart.coordinates().join(", "));
    let _ = writeln!(out, "metric: {}", s.metric.label());
    let _ = writeln!(out, "force ({}): {}", s.force.kind(), s.describe_force());
    let _ = writeln!(out, "initial: q = {:?}, qdot = {:?}", s.initial.q, s.initial.qdot);
    let i = &s.integrator;
    let _ = writeln!(
        out,
        "integrator: {}, h = {:e}, steps = {}{}",
        i.method,
        i.h,
        i.steps,
        if i.project_energy { ", energy projection ON" } else { "" }
    );
    let _ = writeln!(out, "sampling seed: {}", e.seed);
    let _ = writeln!(out);
    if e.outcomes.is_empty() {
        let _ = writeln!(out, "no checks requested");
    }
    for o in &e.outcomes {
        let _ = writeln!(
            out,
            "[{}] {} (expected {}): {}",
            if o.matched() { "ok" } else { "MISMATCH" },
            o.check,
            o.expected,
            o.outcome.as_str()
        );
        for r in &o.reports {
            let _ = writeln!(out, "  {}", r.to_string().replace('\n', "\n  "));
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "exit status: {}", e.status().code());
    out
}

/// Flat `key=value` lines.
pub fn render_summary(s: &Scenario, e: &Evaluation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format_version={FORMAT_VERSION}");
    let _ = writeln!(out, "scenario={}", s.name);
    let _ = writeln!(out, "dimension={}", s.dim());
    let _ = writeln!(out, "force_kind={}", s.force.kind());
    let _ = writeln!(out, "method={}", s.integrator.method);
    let _ = writeln!(out, "h={:e}", s.integrator.h);
    let _ = writeln!(out, "steps={}", s.integrator.steps);
    let _ = writeln!(out, "seed={}", e.seed);
    if let Some(t) = &e.trajectory {
        let _ = writeln!(out, "trajectory_rows={}", t.len());
    }
    let _ = writeln!(out, "checks={}", e.outcomes.len());
    for (k, o) in e.outcomes.iter().enumerate() {
        let _ = writeln!(out, "check.{k}.name={}", o.check);
        let _ = writeln!(out, "check.{k}.measured={:e}", o.measured);
        let _ = writeln!(out, "check.{k}.threshold={:e}", o.threshold);
        let _ = writeln!(out, "check.{k}.verdict={}", o.outcome.as_str());
        let _ = writeln!(out, "check.{k}.expected={}", o.expected);
        let _ = writeln!(out, "check.{k}.matched={}", o.matched());
    }
    let _ = writeln!(out, "exit_code={}", e.status().code());
    out
}

/// One line of the batch table.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchRow {
    pub scenario: String,
    pub check: String,
    pub measured: Option<f64>,
    pub threshold: Option<f64>,
    /// `pass`, `fail`, `mismatch` or `error`.
    pub verdict: String,
    pub expected: String,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchReport {
    pub rows: Vec<BatchRow>,
    /// Load and run errors, in input order.
    pub errors: Vec<String>,
    pub status: ExitStatus,
}

impl BatchReport {
    /// Fixed-layout table; identical for any parallelism.
    pub fn table(&self) -> String {
        let header = ["scenario", "check", "measured", "threshold", "verdict", "expected"];
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6e}"));
        let body: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.scenario.clone(),
                    r.check.clone(),
                    fmt(r.measured),
                    fmt(r.threshold),
                    r.verdict.clone(),
                    r.expected.clone(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &body {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[&str]| {
            let padded: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        };
        line(&header);
        for row in &body {
            line(&row.iter().map(String::as_str).collect::<Vec<_>>());
        }
        out
    }
}

fn batch_one(
    input: &Result<Scenario, ScenarioError>,
    label: &str,
    out: Option<&Path>,
    seed: Option<u64>,
) -> (Vec<BatchRow>, Option<String>, ExitStatus) {
    let error_row = |name: &str| BatchRow {
        scenario: name.to_string(),
        check: "-".into(),
        measured: None,
        threshold: None,
        verdict: "error".into(),
        expected: "-".into(),
        matched: false,
    };
    let s = match input {
        Ok(s) => s,
        Err(e) => return (vec![error_row(label)], Some(e.to_string()), ExitStatus::Error),
    };
    let evaluation = match out {
        Some(dir) => run(s, dir, seed).map(|r| r.evaluation),
        None => evaluate(s, seed, false),
    };
    match evaluation {
        Ok(ev) => {
            let rows = ev
                .outcomes
                .iter()
                .map(|o| BatchRow {
                    scenario: s.name.clone(),
                    check: o.check.clone(),
                    measured: Some(o.measured),
                    threshold: Some(o.threshold),
                    verdict: o.outcome.as_str().into(),
                    expected: o.expected.to_string(),
                    matched: o.matched(),
                })
                .collect();
            (rows, None, ev.status())
        }
        Err(e) => (vec![error_row(&s.name)], Some(e.to_string()), ExitStatus::Error),
    }
}

/// Runs every input on up to `jobs` threads. A failing scenario contributes
/// an `error` row and never stops the others. With `out`, each scenario's
/// files go to its own subdirectory.
pub fn batch(
    inputs: &[(String, Result<Scenario, ScenarioError>)],
    jobs: usize,
    out: Option<&Path>,
    seed: Option<u64>,
) -> BatchReport {
    let jobs = jobs.max(1).min(inputs.len().max(1));
    let results: Vec<(Vec<BatchRow>, Option<String>, ExitStatus)> = if jobs == 1 {
        inputs.iter().map(|(l, s)| batch_one(s, l, out, seed)).collect()
    } else {
        let mut slots: Vec<Option<_>> = vec![None; inputs.len()];
        thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|w| {
                    scope.spawn(move || {
                        inputs
                            .iter()
                            .enumerate()
                            .skip(w)
                            .step_by(jobs)
                            .map(|(i, (l, s))| (i, batch_one(s, l, out, seed)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (i, r) in h.join().expect("batch worker panicked") {
                    slots[i] = Some(r);
                }
            }
        });
        slots.into_iter().map(|r| r.expect("every input ran")).collect()
    };
    let mut report = BatchReport {
        rows: Vec::new(),
        errors: Vec::new(),
        status: ExitStatus::Matched,
    };
    for (rows, err, status) in results {
        report.rows.extend(rows);
        report.errors.extend(err);
        report.status = report.status.max(status);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin;

    #[test]
    fn trajectory_round_trips_exactly() {
        let s = builtin("euclidean-free").unwrap();
        let dir = std::env::temp_dir().join(format!("relmech-rt-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let ev = evaluate(&s, None, true).unwrap();
        let t = ev.trajectory.unwrap();
        let path = dir.join("t.csv");
        write_trajectory(&path, &s, &t).unwrap();
        let table = read_trajectory(&path).unwrap();
        assert_eq!(table.columns, ["t", "x", "y", "x_dot", "y_dot", "T", "theta_dot", "alpha_dot"]);
        for (row, sample) in table.rows.iter().zip(&t.samples) {
            assert_eq!(row[0], sample.t);
            assert_eq!(&row[1..3], sample.state.q.as_slice());
            assert_eq!(&row[3..5], sample.state.qdot.as_slice());
            assert_eq!(row[6], 2.0 * row[5]);
        }
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn empty_batch_is_clean() {
        let r = batch(&[], 4, None, None);
        assert!(r.rows.is_empty());
        assert_eq!(r.status, ExitStatus::Matched);
    }
}
