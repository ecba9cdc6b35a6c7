//! Scenario files: a sectioned, line-oriented text format describing a
//! mechanical system `(M, T₂, α)`, its initial data, the integrator and the
//! checks to run.
//!
//! ```text
//! format_version = 1
//! name = magnetic-uniform
//!
//! [chart]
//! coordinates = x, y, z
//!
//! [constants]
//! B = 1
//!
//! [metric]
//! g(x, x) = 1
//! g(y, y) = 1
//! g(z, z) = 1
//!
//! [force]
//! kind = two_form
//! phi(x, y) = B
//!
//! [initial]
//! q = 0, 0, 0
//! qdot = 1, 0, 0
//!
//! [integrator]
//! method = rk4
//! h = 1e-3
//! steps = 6283
//!
//! [checks]
//! energy_conservation = 1e-8
//! ```
//!
//! The normative grammar is in `docs/scenario-format.md`. Loading validates
//! everything and reports every problem with its line number.

mod builtin;
mod run;

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::diagnostics::Verdict;
use crate::dynamics::{IntegratorConfig, Method};
use crate::expr::{Expr, Func};
use crate::forces::{CovectorField, ForceForm, Potential, StateSampler, TwoFormField};
use crate::geometry::{Chart, MetricField, TangentState};

pub use builtin::{builtin, builtin_names, builtin_source, list_scenarios, BUILTINS};
pub use run::{
    batch, evaluate, read_trajectory, render_report, render_summary, run, write_trajectory, BatchReport,
    BatchRow, CheckOutcome, Evaluation, ExitStatus, Outcome, RunSummary, TrajectoryTable,
};

/// The only format version this crate reads.
pub const FORMAT_VERSION: u32 = 1;

const REQUIRED_SECTIONS: [&str; 5] = ["chart", "metric", "force", "initial", "integrator"];
const KNOWN_SECTIONS: [&str; 9] = [
    "chart",
    "constants",
    "metric",
    "force",
    "initial",
    "integrator",
    "sampling",
    "checks",
    "outputs",
];

/// A validation problem. `line` is 1-based; `None` marks file-level issues
/// such as a missing section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum ScenarioError {
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },

    #[error("{origin}: {} error(s)\n{}", issues.len(), render_issues(issues))]
    Invalid { origin: String, issues: Vec<Issue> },

    #[error("{origin}: {source}")]
    Run {
        origin: String,
        #[source]
        source: crate::Error,
    },
}

fn render_issues(issues: &[Issue]) -> String {
    issues.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n")
}

impl ScenarioError {
    pub fn issues(&self) -> &[Issue] {
        match self {
            ScenarioError::Invalid { issues, .. } => issues,
            _ => &[],
        }
    }
}

/// Work form as declared in the file.
#[derive(Debug, Clone, PartialEq)]
pub enum ForceSpec {
    None,
    /// One component per coordinate, over coordinates and velocities.
    Covector(Vec<Expr>),
    Potential(Expr),
    /// `(i, j, Φᵢⱼ)` with `i < j`.
    TwoForm(Vec<(usize, usize, Expr)>),
}

impl ForceSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ForceSpec::None => "none",
            ForceSpec::Covector(_) => "covector",
            ForceSpec::Potential(_) => "potential",
            ForceSpec::TwoForm(_) => "two_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckSpec {
    EnergyConservation { tol: f64 },
    /// Requires a potential force.
    TotalEnergy { tol: f64 },
    /// Normalized sampled contact residual.
    Contact { tol: f64 },
    Criterio { contact_tol: f64, energy_tol: f64 },
    TwoFormCharacterization { tol: f64 },
}

impl CheckSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CheckSpec::EnergyConservation { .. } => "energy_conservation",
            CheckSpec::TotalEnergy { .. } => "total_energy",
            CheckSpec::Contact { .. } => "contact",
            CheckSpec::Criterio { .. } => "criterio",
            CheckSpec::TwoFormCharacterization { .. } => "two_form_characterization",
        }
    }

    fn needs_trajectory(&self) -> bool {
        matches!(
            self,
            CheckSpec::EnergyConservation { .. } | CheckSpec::TotalEnergy { .. } | CheckSpec::Criterio { .. }
        )
    }
}

/// Box for sampled states. Velocities are always drawn from `[-1, 1]ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampling {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl Sampling {
    pub fn sampler(&self) -> crate::Result<StateSampler> {
        StateSampler::new(self.lower.clone(), self.upper.clone(), self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub trajectory: bool,
    pub report: bool,
    pub summary: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            trajectory: true,
            report: true,
            summary: true,
        }
    }
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub chart: Chart,
    pub constants: Vec<(String, f64)>,
    /// `(j, k, g_jk)` with `j <= k`, constants substituted.
    pub metric_entries: Vec<(usize, usize, Expr)>,
    pub metric: MetricField,
    pub force_spec: ForceSpec,
    pub force: ForceForm,
    pub initial: TangentState,
    pub integrator: IntegratorConfig,
    pub sampling: Sampling,
    pub checks: Vec<CheckSpec>,
    /// Expected verdict of every check.
    pub expect: Verdict,
    pub outputs: Outputs,
}

impl Scenario {
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// `(M, T₂, α)` in one line.
    pub fn summary(&self) -> String {
        format!(
            "M = R^{} ({}); T2: {}; {}",
            self.dim(),
            self.chart.coordinates().join(", "),
            self.metric.label(),
            self.describe_force()
        )
    }

    /// The work form in chart names.
    pub fn describe_force(&self) -> String {
        let names = self.chart.coordinates();
        match &self.force_spec {
            ForceSpec::None => "alpha = 0".into(),
            ForceSpec::Potential(u) => format!("alpha = dU, U = {u}"),
            ForceSpec::TwoForm(entries) => {
                let terms: Vec<String> = entries
                    .iter()
                    .map(|(i, j, c)| format!("{c} d{}^d{}", names[*i], names[*j]))
                    .collect();
                format!("alpha = i_qdot Phi2, Phi2 = {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") })
            }
            ForceSpec::Covector(comps) => {
                let terms: Vec<String> = comps
                    .iter()
                    .zip(names)
                    .filter(|(c, _)| !c.is_const(0.0))
                    .map(|(c, n)| format!("{c} d{n}"))
                    .collect();
                format!("alpha = {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") })
            }
        }
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_scenario(&text, &path.display().to_string())
}

/// Validates scenario text. `origin` names the source in error messages.
pub fn parse_scenario(text: &str, origin: &str) -> Result<Scenario, ScenarioError> {
    let mut v = Validator::default();
    let doc = v.split(text);
    match v.build(&doc) {
        Some(s) if v.issues.is_empty() => Ok(s),
        _ => {
            if v.issues.is_empty() {
                v.issues.push(Issue {
                    line: None,
                    message: "invalid scenario".into(),
                });
            }
            v.issues.sort_by_key(|i| (i.line.is_some(), i.line));
            Err(ScenarioError::Invalid {
                origin: origin.to_string(),
                issues: v.issues,
            })
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    key: String,
    args: Option<Vec<String>>,
    value: String,
}

#[derive(Debug, Default)]
struct Document {
    top: Vec<Entry>,
    sections: HashMap<String, (usize, Vec<Entry>)>,
}

impl Document {
    fn section(&self, name: &str) -> Option<&[Entry]> {
        self.sections.get(name).map(|(_, e)| e.as_slice())
    }
}

#[derive(Default)]
struct Validator {
    issues: Vec<Issue>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn split_list(s: &str) -> Vec<String> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    s.split(',').map(|p| p.trim().to_string()).collect()
}

impl Validator {
    fn err(&mut self, line: usize, message: impl Into<String>) {
        self.issues.push(Issue {
            line: Some(line),
            message: message.into(),
        });
    }

    fn file_err(&mut self, message: impl Into<String>) {
        self.issues.push(Issue {
            line: None,
            message: message.into(),
        });
    }

    fn split(&mut self, text: &str) -> Document {
        let mut doc = Document::default();
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    self.err(line, "unterminated section header");
                    current = None;
                    continue;
                };
                let name = name.trim().to_string();
                if !KNOWN_SECTIONS.contains(&name.as_str()) {
                    self.err(line, format!("unknown section [{name}]"));
                    current = None;
                    continue;
                }
                if let Some((first, _)) = doc.sections.get(&name) {
                    self.err(line, format!("duplicate section [{name}] (first at line {first})"));
                    current = None;
                    continue;
                }
                doc.sections.insert(name.clone(), (line, Vec::new()));
                current = Some(name);
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                self.err(line, format!("expected `key = value`, found {content:?}"));
                continue;
            };
            let (key, value) = (key.trim(), value.trim().to_string());
            let (key, args) = match key.split_once('(') {
                Some((head, tail)) => {
                    let Some(inner) = tail.trim_end().strip_suffix(')') else {
                        self.err(line, format!("unbalanced parentheses in key {key:?}"));
                        continue;
                    };
                    (head.trim().to_string(), Some(split_list(inner)))
                }
                None => (key.to_string(), None),
            };
            if !is_identifier(&key) {
                self.err(line, format!("invalid key {key:?}"));
                continue;
            }
            let entry = Entry { line, key, args, value };
            match &current {
                Some(name) => doc.sections.get_mut(name).expect("section exists").1.push(entry),
                None if doc.sections.is_empty() => doc.top.push(entry),
                // entries after an invalid header were reported with it
                None => {}
            }
        }
        doc
    }

    fn build(&mut self, doc: &Document) -> Option<Scenario> {
        let header = self.header(doc);
        let missing: Vec<&str> = REQUIRED_SECTIONS
            .iter()
            .copied()
            .filter(|s| !doc.sections.contains_key(*s))
            .collect();
        if !missing.is_empty() {
            self.file_err(format!(
                "missing required section(s): {} (required: {})",
                missing.iter().map(|s| format!("[{s}]")).collect::<Vec<_>>().join(", "),
                REQUIRED_SECTIONS.map(|s| format!("[{s}]")).join(", ")
            ));
        }
        let chart = self.chart(doc)?;
        let constants = self.constants(doc, &chart);
        let metric = self.metric(doc, &chart, &constants);
        let force = self.force(doc, &chart, &constants);
        let initial = self.initial(doc, &chart, &constants);
        let integrator = self.integrator(doc);
        let sampling = self.sampling(doc, &chart, &constants);
        let (checks, expect) = self.checks(doc, &force);
        let outputs = self.outputs(doc);
        let (name, description) = header?;
        let (metric_entries, metric) = metric?;
        let (force_spec, force) = force?;
        Some(Scenario {
            name,
            description,
            chart,
            constants,
            metric_entries,
            metric,
            force_spec,
            force,
            initial: initial?,
            integrator: integrator?,
            sampling: sampling?,
            checks: checks?,
            expect,
            outputs: outputs?,
        })
    }

    fn header(&mut self, doc: &Document) -> Option<(String, String)> {
        let mut version = None;
        let mut name = None;
        let mut description = String::new();
        for e in &doc.top {
            if e.args.is_some() {
                self.err(e.line, format!("unexpected argument list on `{}`", e.key));
                continue;
            }
            match e.key.as_str() {
                "format_version" => match e.value.parse::<u32>() {
                    Ok(FORMAT_VERSION) => version = Some(FORMAT_VERSION),
                    Ok(other) => self.err(
                        e.line,
                        format!("unsupported format_version {other} (this reader supports {FORMAT_VERSION})"),
                    ),
                    Err(_) => self.err(e.line, format!("format_version must be an integer, found {:?}", e.value)),
                },
                "name" => {
                    let ok = !e.value.is_empty()
                        && e.value.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
                    if ok {
                        name = Some(e.value.clone());
                    } else {
                        self.err(e.line, format!("name must be non-empty [A-Za-z0-9_-], found {:?}", e.value));
                    }
                }
                "description" => description = e.value.clone(),
                other => self.err(e.line, format!("unknown top-level key `{other}`")),
            }
        }
        if version.is_none() && !doc.top.iter().any(|e| e.key == "format_version") {
            self.file_err(format!("missing `format_version = {FORMAT_VERSION}`"));
        }
        if name.is_none() && !doc.top.iter().any(|e| e.key == "name") {
            self.file_err("missing `name`");
        }
        Some((name?, description))
    }

    fn plain_entries<'a>(&mut self, entries: &'a [Entry], section: &str) -> Vec<&'a Entry> {
        let mut out = Vec::new();
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for e in entries {
            if e.args.is_some() {
                self.err(e.line, format!("unexpected argument list on `{}` in [{section}]", e.key));
                continue;
            }
            if let Some(first) = seen.insert(e.key.as_str(), e.line) {
                self.err(e.line, format!("duplicate key `{}` (first at line {first})", e.key));
                continue;
            }
            out.push(e);
        }
        out
    }

    fn chart(&mut self, doc: &Document) -> Option<Chart> {
        let entries = doc.section("chart")?;
        let mut chart = None;
        for e in self.plain_entries(entries, "chart") {
            match e.key.as_str() {
                "coordinates" => {
                    let names = split_list(&e.value);
                    if names.is_empty() {
                        self.err(e.line, "at least one coordinate is required");
                        continue;
                    }
                    if let Some(f) = names.iter().find(|n| Func::from_name(n).is_some()) {
                        self.err(e.line, format!("coordinate `{f}` shadows a function name"));
                        continue;
                    }
                    match Chart::new(&names) {
                        Ok(c) => chart = Some(c),
                        Err(err) => self.err(e.line, err.to_string()),
                    }
                }
                other => self.err(e.line, format!("unknown key `{other}` in [chart]")),
            }
        }
        if chart.is_none() && !entries.iter().any(|e| e.key == "coordinates") {
            let line = doc.sections["chart"].0;
            self.err(line, "[chart] requires `coordinates`");
        }
        chart
    }

    fn constants(&mut self, doc: &Document, chart: &Chart) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = Vec::new();
        let Some(entries) = doc.section("constants") else {
            return out;
        };
        for e in self.plain_entries(entries, "constants") {
            if chart.coordinates().contains(&e.key) || chart.velocities().contains(&e.key) {
                self.err(e.line, format!("constant `{}` collides with a chart name", e.key));
                continue;
            }
            if Func::from_name(&e.key).is_some() {
                self.err(e.line, format!("constant `{}` shadows a function name", e.key));
                continue;
            }
            if let Some(v) = self.constant_value(e.line, &e.value, &out, &format!("constant `{}`", e.key)) {
                out.push((e.key.clone(), v));
            }
        }
        out
    }

    /// Parses `src`, substitutes constants and checks that every remaining
    /// variable is in `allowed`.
    fn expression(
        &mut self,
        line: usize,
        src: &str,
        allowed: &[&str],
        constants: &[(String, f64)],
        context: &str,
    ) -> Option<Expr> {
        let e = match Expr::parse(src) {
            Ok(e) => e,
            Err(err) => {
                self.err(line, format!("{context}: {err} in {src:?}"));
                return None;
            }
        };
        let lookup = |name: &str| constants.iter().find(|(n, _)| n == name).map(|(_, v)| *v);
        let e = e.substitute(&lookup).simplify();
        let unbound: Vec<String> = e.variables().into_iter().filter(|v| !allowed.contains(&v.as_str())).collect();
        if !unbound.is_empty() {
            for u in unbound {
                self.err(line, format!("{context}: unbound identifier `{u}`"));
            }
            return None;
        }
        Some(e)
    }

    fn constant_value(&mut self, line: usize, src: &str, constants: &[(String, f64)], context: &str) -> Option<f64> {
        let e = self.expression(line, src, &[], constants, context)?;
        match e.evaluate(&Default::default()) {
            Ok(v) => Some(v),
            Err(err) => {
                self.err(line, format!("{context}: {err}"));
                None
            }
        }
    }

    fn number_list(
        &mut self,
        e: &Entry,
        n: usize,
        constants: &[(String, f64)],
        context: &str,
    ) -> Option<Vec<f64>> {
        let items = split_list(&e.value);
        if items.len() != n {
            self.err(
                e.line,
                format!("dimension mismatch: {context} has {} value(s), chart has {n}", items.len()),
            );
            return None;
        }
        let values: Vec<Option<f64>> = items
            .iter()
            .enumerate()
            .map(|(i, s)| self.constant_value(e.line, s, constants, &format!("{context}[{i}]")))
            .collect();
        values.into_iter().collect()
    }

    /// Resolves an argument list of coordinate names to indices.
    fn indices(&mut self, e: &Entry, chart: &Chart, arity: usize) -> Option<Vec<usize>> {
        let Some(args) = &e.args else {
            self.err(e.line, format!("`{}` needs {arity} coordinate argument(s)", e.key));
            return None;
        };
        if args.len() != arity {
            self.err(
                e.line,
                format!("`{}` takes {arity} coordinate argument(s), found {}", e.key, args.len()),
            );
            return None;
        }
        let mut out = Vec::new();
        for a in args {
            match chart.index_of(a) {
                Some(i) => out.push(i),
                None => {
                    self.err(e.line, format!("unbound identifier `{a}`: not a coordinate of the chart"));
                    return None;
                }
            }
        }
        Some(out)
    }

    #[allow(clippy::type_complexity)]
    fn metric(
        &mut self,
        doc: &Document,
        chart: &Chart,
        constants: &[(String, f64)],
    ) -> Option<(Vec<(usize, usize, Expr)>, MetricField)> {
        let entries = doc.section("metric")?;
        let slots = chart.coordinate_slots();
        let mut out: Vec<(usize, usize, Expr)> = Vec::new();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut ok = true;
        for e in entries {
            if e.key != "g" {
                self.err(e.line, format!("unknown key `{}` in [metric]; expected g(a, b) = expr", e.key));
                ok = false;
                continue;
            }
            let Some(idx) = self.indices(e, chart, 2) else {
                ok = false;
                continue;
            };
            let (j, k) = (idx[0].min(idx[1]), idx[0].max(idx[1]));
            if let Some(first) = seen.insert((j, k), e.line) {
                self.err(e.line, format!("metric component g({}, {}) already given at line {first}", chart.coordinates()[j], chart.coordinates()[k]));
                ok = false;
                continue;
            }
            let context = format!("metric component g({}, {})", chart.coordinates()[j], chart.coordinates()[k]);
            let Some(expr) = self.expression(e.line, &e.value, &slots, constants, &context) else {
                ok = false;
                continue;
            };
            if let Some(err) = slots.iter().find_map(|v| expr.differentiate(v).err()) {
                self.err(e.line, format!("{context}: {err}"));
                ok = false;
                continue;
            }
            out.push((j, k, expr));
        }
        if out.is_empty() && ok {
            let line = doc.sections["metric"].0;
            self.err(line, "[metric] declares no components");
            return None;
        }
        if !ok {
            return None;
        }
        match MetricField::from_exprs(chart, &out) {
            Ok(m) => Some((out, m)),
            Err(err) => {
                self.err(doc.sections["metric"].0, err.to_string());
                None
            }
        }
    }

    fn force(&mut self, doc: &Document, chart: &Chart, constants: &[(String, f64)]) -> Option<(ForceSpec, ForceForm)> {
        let entries = doc.section("force")?;
        let header_line = doc.sections["force"].0;
        let kinds: Vec<&Entry> = entries.iter().filter(|e| e.key == "kind").collect();
        let kind = match kinds.as_slice() {
            [] => {
                self.err(header_line, "[force] requires `kind = none | covector | potential | two_form`");
                return None;
            }
            [k] => k,
            [_, dup, ..] => {
                self.err(dup.line, "duplicate key `kind`");
                return None;
            }
        };
        let n = chart.dim();
        let q_slots = chart.coordinate_slots();
        let phase = chart.phase_slots();
        let rest: Vec<&Entry> = entries.iter().filter(|e| e.key != "kind").collect();
        let expect_key = |v: &mut Self, e: &Entry, key: &str| -> bool {
            if e.key == key {
                true
            } else {
                v.err(e.line, format!("unexpected key `{}` for force kind `{}`", e.key, kind.value));
                false
            }
        };
        match kind.value.as_str() {
            "none" => {
                for e in &rest {
                    self.err(e.line, format!("force kind `none` takes no entries, found `{}`", e.key));
                }
                rest.is_empty().then(|| (ForceSpec::None, ForceForm::zero(n)))
            }
            "potential" => {
                let mut u = None;
                let mut ok = true;
                for e in &rest {
                    if !expect_key(self, e, "U") || e.args.is_some() || u.is_some() {
                        if e.key == "U" {
                            self.err(e.line, "potential takes a single `U = expr`");
                        }
                        ok = false;
                        continue;
                    }
                    match self.expression(e.line, &e.value, &q_slots, constants, "potential U") {
                        Some(expr) => u = Some((e.line, expr)),
                        None => ok = false,
                    }
                }
                if u.is_none() && ok {
                    self.err(header_line, "potential force requires `U = expr`");
                }
                let (line, u) = u.filter(|_| ok)?;
                match Potential::from_expr(chart, &u) {
                    Ok(p) => Some((ForceSpec::Potential(u), ForceForm::from_potential(p))),
                    Err(err) => {
                        self.err(line, format!("potential U: {err}"));
                        None
                    }
                }
            }
            "two_form" => {
                let mut out = Vec::new();
                let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
                let mut ok = true;
                for e in &rest {
                    if !expect_key(self, e, "phi") {
                        ok = false;
                        continue;
                    }
                    let Some(idx) = self.indices(e, chart, 2) else {
                        ok = false;
                        continue;
                    };
                    let (i, j) = (idx[0], idx[1]);
                    if i == j {
                        self.err(e.line, "two-form component phi(a, a) must be zero and cannot be set");
                        ok = false;
                        continue;
                    }
                    if let Some(first) = seen.insert((i.min(j), i.max(j)), e.line) {
                        self.err(e.line, format!("two-form component already given at line {first}"));
                        ok = false;
                        continue;
                    }
                    let context = format!("two-form component phi({}, {})", chart.coordinates()[i], chart.coordinates()[j]);
                    match self.expression(e.line, &e.value, &q_slots, constants, &context) {
                        // phi(b, a) = c declares phi(a, b) = -c
                        Some(expr) if i < j => out.push((i, j, expr)),
                        Some(expr) => out.push((j, i, Expr::neg(expr).simplify())),
                        None => ok = false,
                    }
                }
                if !ok {
                    return None;
                }
                match TwoFormField::from_exprs(chart, &out) {
                    Ok(f) => Some((ForceSpec::TwoForm(out), ForceForm::from_two_form(f))),
                    Err(err) => {
                        self.err(header_line, err.to_string());
                        None
                    }
                }
            }
            "covector" => {
                let mut comps: Vec<Option<Expr>> = vec![None; n];
                let mut ok = true;
                for e in &rest {
                    if !expect_key(self, e, "alpha") {
                        ok = false;
                        continue;
                    }
                    let Some(idx) = self.indices(e, chart, 1) else {
                        ok = false;
                        continue;
                    };
                    if comps[idx[0]].is_some() {
                        self.err(e.line, format!("alpha({}) given twice", chart.coordinates()[idx[0]]));
                        ok = false;
                        continue;
                    }
                    let context = format!("work form component alpha({})", chart.coordinates()[idx[0]]);
                    match self.expression(e.line, &e.value, &phase, constants, &context) {
                        Some(expr) => comps[idx[0]] = Some(expr),
                        None => ok = false,
                    }
                }
                if !ok {
                    return None;
                }
                // omitted components are zero
                let comps: Vec<Expr> = comps.into_iter().map(|c| c.unwrap_or(Expr::Const(0.0))).collect();
                match CovectorField::from_exprs(chart, &comps) {
                    Ok(c) => Some((ForceSpec::Covector(comps), ForceForm::General(c))),
                    Err(err) => {
                        self.err(header_line, err.to_string());
                        None
                    }
                }
            }
            other => {
                self.err(
                    kind.line,
                    format!("unknown force kind `{other}`; expected none, covector, potential or two_form"),
                );
                None
            }
        }
    }

    fn initial(&mut self, doc: &Document, chart: &Chart, constants: &[(String, f64)]) -> Option<TangentState> {
        let entries = doc.section("initial")?;
        let n = chart.dim();
        let mut q = None;
        let mut qdot = None;
        let mut ok = true;
        for e in self.plain_entries(entries, "initial") {
            match e.key.as_str() {
                "q" => q = self.number_list(e, n, constants, "initial q"),
                "qdot" => qdot = self.number_list(e, n, constants, "initial qdot"),
                other => {
                    self.err(e.line, format!("unknown key `{other}` in [initial]"));
                    ok = false;
                }
            }
        }
        let line = doc.sections["initial"].0;
        for (key, present) in [("q", entries.iter().any(|e| e.key == "q")), ("qdot", entries.iter().any(|e| e.key == "qdot"))] {
            if !present {
                self.err(line, format!("[initial] requires `{key}`"));
            }
        }
        if !ok {
            return None;
        }
        Some(TangentState::new(q?, qdot?))
    }

    fn integrator(&mut self, doc: &Document) -> Option<IntegratorConfig> {
        let entries = doc.section("integrator")?;
        let mut method = Some(Method::default());
        let mut h = None;
        let mut steps = None;
        let mut project = Some(false);
        for e in self.plain_entries(entries, "integrator") {
            match e.key.as_str() {
                "method" => {
                    method = e.value.parse::<Method>().ok();
                    if method.is_none() {
                        self.err(e.line, format!("unknown method {:?}; expected rk4, euler or velocity-verlet", e.value));
                    }
                }
                "h" => {
                    h = e.value.parse::<f64>().ok().filter(|h| h.is_finite() && *h > 0.0);
                    if h.is_none() {
                        self.err(e.line, format!("h must be a positive number, found {:?}", e.value));
                    }
                }
                "steps" => {
                    steps = e.value.parse::<usize>().ok().filter(|s| *s > 0);
                    if steps.is_none() {
                        self.err(e.line, format!("steps must be a positive integer, found {:?}", e.value));
                    }
                }
                "project" => {
                    project = parse_bool(&e.value);
                    if project.is_none() {
                        self.err(e.line, format!("project must be true or false, found {:?}", e.value));
                    }
                }
                other => self.err(e.line, format!("unknown key `{other}` in [integrator]")),
            }
        }
        let line = doc.sections["integrator"].0;
        for key in ["h", "steps"] {
            if !entries.iter().any(|e| e.key == key) {
                self.err(line, format!("[integrator] requires `{key}`"));
            }
        }
        let mut cfg = IntegratorConfig::rk4(h?, steps?).with_method(method?);
        cfg.project_energy = project?;
        Some(cfg)
    }

    fn sampling(&mut self, doc: &Document, chart: &Chart, constants: &[(String, f64)]) -> Option<Sampling> {
        let n = chart.dim();
        let mut s = Sampling {
            lower: vec![-1.0; n],
            upper: vec![1.0; n],
            samples: 1000,
            seed: 0,
        };
        let Some(entries) = doc.section("sampling") else {
            return Some(s);
        };
        let mut ok = true;
        for e in self.plain_entries(entries, "sampling") {
            match e.key.as_str() {
                "lower" => match self.number_list(e, n, constants, "sampling lower") {
                    Some(v) => s.lower = v,
                    None => ok = false,
                },
                "upper" => match self.number_list(e, n, constants, "sampling upper") {
                    Some(v) => s.upper = v,
                    None => ok = false,
                },
                "samples" => match e.value.parse::<usize>() {
                    Ok(v) if v > 0 => s.samples = v,
                    _ => {
                        self.err(e.line, format!("samples must be a positive integer, found {:?}", e.value));
                        ok = false;
                    }
                },
                "seed" => match e.value.parse::<u64>() {
                    Ok(v) => s.seed = v,
                    Err(_) => {
                        self.err(e.line, format!("seed must be a non-negative integer, found {:?}", e.value));
                        ok = false;
                    }
                },
                other => {
                    self.err(e.line, format!("unknown key `{other}` in [sampling]"));
                    ok = false;
                }
            }
        }
        if ok {
            if let Some(i) = (0..n).find(|&i| s.lower[i] > s.upper[i]) {
                self.err(doc.sections["sampling"].0, format!("sampling box is empty in coordinate {}", chart.coordinates()[i]));
                ok = false;
            }
        }
        ok.then_some(s)
    }

    fn checks(&mut self, doc: &Document, force: &Option<(ForceSpec, ForceForm)>) -> (Option<Vec<CheckSpec>>, Verdict) {
        let mut out = Vec::new();
        let mut expect = Verdict::Pass;
        let Some(entries) = doc.section("checks") else {
            return (Some(out), expect);
        };
        let mut ok = true;
        for e in self.plain_entries(entries, "checks") {
            let tols: Option<Vec<f64>> = split_list(&e.value)
                .iter()
                .map(|s| s.parse::<f64>().ok().filter(|t| t.is_finite() && *t >= 0.0))
                .collect();
            let single = |v: &mut Self, tols: &Option<Vec<f64>>| -> Option<f64> {
                match tols.as_deref() {
                    Some([t]) => Some(*t),
                    _ => {
                        v.err(e.line, format!("`{}` takes one non-negative tolerance, found {:?}", e.key, e.value));
                        None
                    }
                }
            };
            let check = match e.key.as_str() {
                "expect" => {
                    match e.value.as_str() {
                        "pass" => expect = Verdict::Pass,
                        "fail" => expect = Verdict::Fail,
                        other => {
                            self.err(e.line, format!("expect must be pass or fail, found {other:?}"));
                            ok = false;
                        }
                    }
                    continue;
                }
                "energy_conservation" => single(self, &tols).map(|tol| CheckSpec::EnergyConservation { tol }),
                "contact" => single(self, &tols).map(|tol| CheckSpec::Contact { tol }),
                "two_form_characterization" => {
                    single(self, &tols).map(|tol| CheckSpec::TwoFormCharacterization { tol })
                }
                "total_energy" => {
                    let c = single(self, &tols).map(|tol| CheckSpec::TotalEnergy { tol });
                    if c.is_some() && !matches!(force, Some((ForceSpec::Potential(_), _))) && force.is_some() {
                        self.err(e.line, "total_energy requires force kind `potential`");
                        ok = false;
                        continue;
                    }
                    c
                }
                "criterio" => match tols.as_deref() {
                    Some([c, en]) => Some(CheckSpec::Criterio {
                        contact_tol: *c,
                        energy_tol: *en,
                    }),
                    _ => {
                        self.err(
                            e.line,
                            format!("criterio takes `contact_tol, energy_tol`, found {:?}", e.value),
                        );
                        None
                    }
                },
                other => {
                    self.err(e.line, format!("unknown check `{other}`"));
                    None
                }
            };
            match check {
                Some(c) => out.push(c),
                None => ok = false,
            }
        }
        (ok.then_some(out), expect)
    }

    fn outputs(&mut self, doc: &Document) -> Option<Outputs> {
        let Some(entries) = doc.section("outputs") else {
            return Some(Outputs::default());
        };
        let mut out = Outputs::default();
        let mut ok = true;
        for e in self.plain_entries(entries, "outputs") {
            let value = parse_bool(&e.value);
            let slot = match e.key.as_str() {
                "trajectory" => &mut out.trajectory,
                "report" => &mut out.report,
                "summary" => &mut out.summary,
                other => {
                    self.err(e.line, format!("unknown output `{other}`; expected trajectory, report or summary"));
                    ok = false;
                    continue;
                }
            };
            match value {
                Some(v) => *slot = v,
                None => {
                    self.err(e.line, format!("`{}` must be true or false, found {:?}", e.key, e.value));
                    ok = false;
                }
            }
        }
        ok.then_some(out)
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" => Some(true),
        "false" | "no" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "format_version = 1
name = tiny
[chart]
coordinates = x, y
[metric]
g(x, x) = 1
g(y, y) = 1
[force]
kind = none
[initial]
q = 0, 0
qdot = 1, 2
[integrator]
h = 0.1
steps = 10
";

    fn issues(text: &str) -> Vec<Issue> {
        parse_scenario(text, "test").unwrap_err().issues().to_vec()
    }

    #[test]
    fn minimal_scenario_loads() {
        let s = parse_scenario(MINIMAL, "test").unwrap();
        assert_eq!(s.name, "tiny");
        assert_eq!(s.dim(), 2);
        assert_eq!(s.integrator.steps, 10);
        assert_eq!(s.expect, Verdict::Pass);
        assert!(s.checks.is_empty());
        assert_eq!(s.sampling.lower, vec![-1.0, -1.0]);
    }

    #[test]
    fn empty_file_lists_required_sections() {
        let all = issues("");
        let text: Vec<String> = all.iter().map(|i| i.to_string()).collect();
        let joined = text.join("\n");
        for s in REQUIRED_SECTIONS {
            assert!(joined.contains(&format!("[{s}]")), "{joined}");
        }
        assert!(joined.contains("format_version"));
    }

    #[test]
    fn unbound_metric_identifier_is_named_with_line() {
        let text = MINIMAL.replace("g(x, x) = 1", "g(x, x) = r^2");
        let all = issues(&text);
        assert_eq!(all.len(), 1, "{all:?}");
        assert_eq!(all[0].line, Some(6));
        assert!(all[0].message.contains("`r`"));
    }

    #[test]
    fn all_errors_are_collected() {
        let text = MINIMAL
            .replace("qdot = 1, 2", "qdot = 1, 2, 3")
            .replace("h = 0.1", "h = -1")
            .replace("kind = none", "kind = magic");
        let lines: Vec<Option<usize>> = issues(&text).iter().map(|i| i.line).collect();
        assert_eq!(lines, vec![Some(9), Some(12), Some(14)]);
    }

    #[test]
    fn constants_are_substituted() {
        let text = MINIMAL
            .replace("[chart]", "[constants]\nk = 2\nk2 = k*k\n[chart]")
            .replace("g(y, y) = 1", "g(y, y) = k2*x^2 + 1");
        let s = parse_scenario(&text, "test").unwrap();
        let g = s.metric.components(&[1.0, 0.0]).unwrap();
        assert_eq!(g[(1, 1)], 5.0);
    }

    #[test]
    fn swapped_two_form_arguments_flip_sign() {
        let text = MINIMAL.replace("kind = none", "kind = two_form\nphi(y, x) = 3");
        let s = parse_scenario(&text, "test").unwrap();
        let ForceSpec::TwoForm(entries) = &s.force_spec else { panic!() };
        assert_eq!(entries[0].0, 0);
        assert_eq!(entries[0].2.as_const(), Some(-3.0));
    }

    #[test]
    fn velocity_names_only_in_covectors() {
        let ok = MINIMAL.replace("kind = none", "kind = covector\nalpha(x) = y_dot");
        assert!(parse_scenario(&ok, "test").is_ok());
        let bad = MINIMAL.replace("kind = none", "kind = potential\nU = x_dot");
        assert!(issues(&bad)[0].message.contains("`x_dot`"));
    }

    #[test]
    fn duplicate_symmetric_metric_component() {
        let text = MINIMAL.replace("g(y, y) = 1", "g(y, y) = 1\ng(x, y) = 0\ng(y, x) = 0");
        assert!(issues(&text)[0].message.contains("already given"));
    }
}
