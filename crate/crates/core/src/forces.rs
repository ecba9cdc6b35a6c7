//! Work forms `α` on the tangent bundle.
//!
//! A work form has components `αⱼ(q, q̇)` against `dqʲ`. It is *contact* when
//! `α̇ = αⱼ q̇ʲ` vanishes identically; contact work forms are exactly those
//! producing motions that keep the kinetic energy constant, whatever the
//! metric.
//!
//! The canonical contact forms come from 2-forms: for
//! `Φ₂ = Σ_{i<j} Φᵢⱼ dqⁱ∧dqʲ` the work form is `αⱼ = q̇ⁱ Φᵢⱼ`, with no ½
//! factor, so that `dqⁱ∧dqʲ` contracts to `q̇ⁱdqʲ − q̇ʲdqⁱ`.
//!
//! Sign convention: the equations of motion are `q̈ˡ = −(gˡᵏαₖ + Γˡᵢⱼq̇ⁱq̇ʲ)`,
//! so a potential `U` enters as `α = dU` and pushes towards decreasing `U`.
//! The crate only exposes `α` and the covariant value, never a "force vector".

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::expr::{BinOp, Expr};
use crate::geometry::{dotted_pairing, Chart, Covector, MetricEval, ScalarFn, TangentState};
use crate::linalg::SquareMatrix;

/// Velocities with Euclidean norm below this are resampled: the contact
/// system is only defined off the zero section.
pub const MIN_SAMPLE_SPEED: f64 = 1e-6;

/// Antisymmetric `Φᵢⱼ(q)`, stored for `i < j` only.
#[derive(Debug, Clone)]
pub struct TwoFormField {
    dim: usize,
    upper: Vec<ScalarFn>,
}

fn strict_upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl TwoFormField {
    pub fn zero(dim: usize) -> Self {
        TwoFormField {
            dim,
            upper: vec![ScalarFn::Const(0.0); dim * dim.saturating_sub(1) / 2],
        }
    }

    /// Sets `Φᵢⱼ` (and so `Φⱼᵢ = −Φᵢⱼ`). `i == j` is rejected.
    pub fn with(mut self, i: usize, j: usize, coefficient: ScalarFn) -> Result<Self> {
        let n = self.dim;
        if i >= n || j >= n || i == j {
            return Err(Error::InvalidArgument(format!(
                "two-form coefficient ({i}, {j}) is not an off-diagonal entry of dimension {n}"
            )));
        }
        let value = if i < j { coefficient } else { coefficient.negated() };
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.upper[strict_upper_index(n, a, b)] = value;
        Ok(self)
    }

    /// Constant coefficients `(i, j, Φᵢⱼ)`.
    pub fn constant(dim: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        entries
            .iter()
            .try_fold(Self::zero(dim), |f, &(i, j, v)| f.with(i, j, ScalarFn::Const(v)))
    }

    /// Expression coefficients over the chart coordinates.
    pub fn from_exprs(chart: &Chart, entries: &[(usize, usize, Expr)]) -> Result<Self> {
        let slots = chart.coordinate_slots();
        let mut field = Self::zero(chart.dim());
        for (i, j, e) in entries {
            field = field.with(*i, *j, ScalarFn::from_expr(e, &slots)?)?;
        }
        Ok(field)
    }

    /// Constant two-form with the given antisymmetric coefficient matrix.
    pub fn from_matrix(m: &SquareMatrix) -> Result<Self> {
        let n = m.dim();
        let mut field = Self::zero(n);
        for i in 0..n {
            for j in (i + 1)..n {
                field = field.with(i, j, ScalarFn::Const(m[(i, j)]))?;
            }
        }
        Ok(field)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(ScalarFn::is_zero)
    }

    /// Coefficient matrix `Φᵢⱼ(q)`; antisymmetric with zero diagonal.
    pub fn eval(&self, q: &[f64]) -> Result<SquareMatrix> {
        check_dim("two-form evaluation point", self.dim, q.len())?;
        let n = self.dim;
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = self.upper[strict_upper_index(n, i, j)].eval(q)?;
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        Ok(m)
    }

    /// `(i, j, Φᵢⱼ)` for the nonzero stored entries.
    pub fn entries(&self) -> Vec<(usize, usize, &ScalarFn)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let c = &self.upper[strict_upper_index(n, i, j)];
                if !c.is_zero() {
                    out.push((i, j, c));
                }
            }
        }
        out
    }
}

/// A potential `U(q)`; its work form is `α = dU`.
#[derive(Debug, Clone)]
pub struct Potential {
    expr: Expr,
    value: ScalarFn,
    gradient: Vec<ScalarFn>,
}

impl Potential {
    pub fn from_expr(chart: &Chart, u: &Expr) -> Result<Self> {
        let slots = chart.coordinate_slots();
        let gradient = slots
            .iter()
            .map(|v| ScalarFn::from_expr(&u.differentiate(v)?, &slots))
            .collect::<Result<Vec<_>>>()?;
        Ok(Potential {
            expr: u.clone(),
            value: ScalarFn::from_expr(u, &slots)?,
            gradient,
        })
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn value(&self, q: &[f64]) -> Result<f64> {
        check_dim("potential evaluation point", self.dim(), q.len())?;
        self.value.eval(q)
    }

    pub fn gradient(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_dim("potential evaluation point", self.dim(), q.len())?;
        self.gradient.iter().map(|g| g.eval(q)).collect()
    }
}

/// General work form with components given over `[q..., q̇...]`.
#[derive(Debug, Clone)]
pub struct CovectorField {
    components: Vec<ScalarFn>,
}

impl CovectorField {
    /// One expression per coordinate, over coordinates and velocities.
    pub fn from_exprs(chart: &Chart, components: &[Expr]) -> Result<Self> {
        check_dim("work form components", chart.dim(), components.len())?;
        let slots = chart.phase_slots();
        Ok(CovectorField {
            components: components
                .iter()
                .map(|e| ScalarFn::from_expr(e, &slots))
                .collect::<Result<_>>()?,
        })
    }

    /// Native components; each closure receives `[q..., q̇...]`.
    pub fn from_fns(components: Vec<ScalarFn>) -> Self {
        CovectorField { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarFn] {
        &self.components
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceKind {
    Zero,
    Potential,
    TwoForm,
    General,
}

impl fmt::Display for ForceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ForceKind::Zero => "zero",
            ForceKind::Potential => "potential",
            ForceKind::TwoForm => "two_form",
            ForceKind::General => "covector",
        })
    }
}

/// The work form `α` of a mechanical system.
#[derive(Debug, Clone)]
pub enum ForceForm {
    Zero { dim: usize },
    Potential(Potential),
    TwoForm(TwoFormField),
    General(CovectorField),
}

impl ForceForm {
    pub fn zero(dim: usize) -> Self {
        ForceForm::Zero { dim }
    }

    /// `α = i_ḋ Φ₂`, componentwise `αⱼ = q̇ⁱ Φᵢⱼ`.
    pub fn from_two_form(phi2: TwoFormField) -> Self {
        ForceForm::TwoForm(phi2)
    }

    /// `αⱼ = ∂U/∂qʲ`.
    pub fn from_potential(u: Potential) -> Self {
        ForceForm::Potential(u)
    }

    pub fn kind(&self) -> ForceKind {
        match self {
            ForceForm::Zero { .. } => ForceKind::Zero,
            ForceForm::Potential(_) => ForceKind::Potential,
            ForceForm::TwoForm(_) => ForceKind::TwoForm,
            ForceForm::General(_) => ForceKind::General,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ForceForm::Zero { dim } => *dim,
            ForceForm::Potential(u) => u.dim(),
            ForceForm::TwoForm(p) => p.dim(),
            ForceForm::General(c) => c.dim(),
        }
    }

    /// `(α₁, …, αₙ)` at `s`.
    pub fn eval(&self, s: &TangentState) -> Result<Covector> {
        check_dim("work form evaluation", self.dim(), s.dim())?;
        match self {
            ForceForm::Zero { dim } => Ok(Covector::zeros(*dim)),
            ForceForm::Potential(u) => Ok(Covector(u.gradient(&s.q)?)),
            ForceForm::TwoForm(phi) => {
                let m = phi.eval(&s.q)?;
                let n = s.dim();
                Ok(Covector(
                    (0..n)
                        .map(|j| (0..n).map(|i| s.qdot[i] * m[(i, j)]).sum())
                        .collect(),
                ))
            }
            ForceForm::General(c) => {
                let values = s.phase_values();
                Ok(Covector(
                    c.components
                        .iter()
                        .map(|f| f.eval(&values))
                        .collect::<Result<_>>()?,
                ))
            }
        }
    }

    /// `α̇(s) = αᵢ(s) q̇ⁱ`.
    pub fn contact_residual(&self, s: &TangentState) -> Result<f64> {
        dotted_pairing(&self.eval(s)?, s)
    }

    /// An exact reason the form is contact, when one is available without sampling.
    pub fn contact_certificate(&self) -> Option<ContactCertificate> {
        match self {
            ForceForm::Zero { .. } => Some(ContactCertificate::Zero),
            ForceForm::TwoForm(_) => Some(ContactCertificate::Antisymmetry),
            ForceForm::Potential(u) => {
                let all_zero = u.gradient.iter().all(ScalarFn::is_zero);
                all_zero.then_some(ContactCertificate::Zero)
            }
            ForceForm::General(c) => {
                let n = c.dim();
                let exprs: Option<Vec<Expr>> = c.components.iter().map(ScalarFn::as_expr).collect();
                let exprs = exprs?;
                // Velocity slots are bound after the n coordinates; rebuild the
                // pairing over placeholder names and see whether it folds to 0.
                let chart = Chart::indexed(n);
                let slots = chart.phase_slots();
                let pairing = exprs.iter().enumerate().fold(Expr::Const(0.0), |acc, (i, e)| {
                    let term = Expr::binary(BinOp::Mul, e.clone(), Expr::var(slots[n + i]));
                    Expr::binary(BinOp::Add, acc, term)
                });
                pairing
                    .simplify()
                    .is_const(0.0)
                    .then_some(ContactCertificate::SymbolicZero)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ForceForm::Zero { .. } => "alpha = 0".into(),
            ForceForm::Potential(u) => format!("alpha = dU, U = {}", u.expr()),
            ForceForm::TwoForm(p) => {
                let terms: Vec<String> = p
                    .entries()
                    .iter()
                    .map(|(i, j, c)| format!("({c}) dq{i}^dq{j}"))
                    .collect();
                if terms.is_empty() {
                    "alpha = i_d Phi2, Phi2 = 0".into()
                } else {
                    format!("alpha = i_d Phi2, Phi2 = {}", terms.join(" + "))
                }
            }
            ForceForm::General(c) => {
                let comps: Vec<String> = c.components.iter().map(|f| f.to_string()).collect();
                format!("alpha = ({})", comps.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactCertificate {
    /// The form is identically zero.
    Zero,
    /// Built from a two-form: `q̇ⁱΦᵢⱼq̇ʲ = 0` by antisymmetry.
    Antisymmetry,
    /// `αᵢq̇ⁱ` simplified to the constant 0.
    SymbolicZero,
}

/// Draws tangent states: coordinates uniform in a box, velocities uniform on
/// `[-1, 1]ⁿ` with `|q̇| >= MIN_SAMPLE_SPEED`.
#[derive(Debug, Clone)]
pub struct StateSampler {
    lower: Vec<f64>,
    upper: Vec<f64>,
    seed: u64,
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, seed: u64) -> Result<Self> {
        check_dim("sampling box", lower.len(), upper.len())?;
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] <= upper[i])) {
            return Err(Error::InvalidArgument(format!(
                "sampling box has lower[{i}] = {} above upper[{i}] = {}",
                lower[i], upper[i]
            )));
        }
        Ok(StateSampler {
            lower,
            upper,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// Symmetric box `[-half_width, half_width]ⁿ`.
    pub fn cube(dim: usize, half_width: f64, seed: u64) -> Self {
        Self::new(vec![-half_width; dim], vec![half_width; dim], seed).expect("valid cube")
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sample(&mut self) -> TangentState {
        let q = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(&a, &b)| if a == b { a } else { self.rng.random_range(a..b) })
            .collect();
        let n = self.dim();
        loop {
            let v: Vec<f64> = (0..n).map(|_| self.rng.random_range(-1.0..1.0)).collect();
            if v.iter().map(|x| x * x).sum::<f64>().sqrt() >= MIN_SAMPLE_SPEED {
                return TangentState::new(q, v);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContactTolerance {
    /// Bound on `|α̇|`.
    Absolute(f64),
    /// Bound on `|α̇| / (|α| |q̇|)` (Euclidean component norms; 0 when `α = 0`).
    Normalized(f64),
}

impl ContactTolerance {
    pub fn value(self) -> f64 {
        match self {
            ContactTolerance::Absolute(t) | ContactTolerance::Normalized(t) => t,
        }
    }
}

/// Outcome of [`is_contact`]. A failing verdict is a certificate that the form
/// is not contact; a passing one is evidence over the drawn samples only,
/// unless `certificate` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactVerdict {
    pub holds: bool,
    pub max_abs_residual: f64,
    pub max_normalized_residual: f64,
    pub tolerance: ContactTolerance,
    pub samples: usize,
    pub seed: u64,
    pub certificate: Option<ContactCertificate>,
}

impl ContactVerdict {
    pub fn measured(&self) -> f64 {
        match self.tolerance {
            ContactTolerance::Absolute(_) => self.max_abs_residual,
            ContactTolerance::Normalized(_) => self.max_normalized_residual,
        }
    }
}

/// Sampled contact test. Takes no metric: whether a work form is contact does
/// not depend on one.
pub fn is_contact(
    f: &ForceForm,
    sampler: &mut StateSampler,
    n_samples: usize,
    tolerance: ContactTolerance,
) -> Result<ContactVerdict> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    check_dim("sampler", f.dim(), sampler.dim())?;
    let mut max_abs = 0.0f64;
    let mut max_norm = 0.0f64;
    for _ in 0..n_samples {
        let s = sampler.sample();
        let alpha = f.eval(&s)?;
        let r = dotted_pairing(&alpha, &s)?.abs();
        let scale = alpha.norm() * s.qdot.iter().map(|x| x * x).sum::<f64>().sqrt();
        max_abs = max_abs.max(r);
        if scale > 0.0 {
            max_norm = max_norm.max(r / scale);
        }
    }
    let measured = match tolerance {
        ContactTolerance::Absolute(_) => max_abs,
        ContactTolerance::Normalized(_) => max_norm,
    };
    Ok(ContactVerdict {
        holds: measured <= tolerance.value(),
        max_abs_residual: max_abs,
        max_normalized_residual: max_norm,
        tolerance,
        samples: n_samples,
        seed: sampler.seed(),
        certificate: f.contact_certificate(),
    })
}

/// The field of endomorphisms `Φ` with `w = Φ(q̇)` for a two-form force.
#[derive(Debug, Clone, PartialEq)]
pub struct EndomorphismEval {
    pub phi: SquareMatrix,
}

impl EndomorphismEval {
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.phi.mul_vec(v)
    }
}

/// `Φˡⱼ = −gˡᵏ Φⱼₖ`, the endomorphism solving `i_w T₂ + α = 0` with `w = Φ(q̇)`.
/// It is skew-adjoint for `T₂`.
pub fn endomorphism(phi2: &TwoFormField, me: &MetricEval, q: &[f64]) -> Result<EndomorphismEval> {
    check_dim("endomorphism", phi2.dim(), me.dim())?;
    let form = phi2.eval(q)?;
    let n = me.dim();
    let phi = SquareMatrix::from_fn(n, |l, j| {
        -(0..n).map(|k| me.g_inv[(l, k)] * form[(j, k)]).sum::<f64>()
    });
    let out = EndomorphismEval { phi };
    #[cfg(debug_assertions)]
    debug_check_skew(&out, me);
    Ok(out)
}

#[cfg(debug_assertions)]
fn debug_check_skew(e: &EndomorphismEval, me: &MetricEval) {
    let n = me.dim();
    for trial in 0..10u32 {
        // deterministic spread of test vectors
        let v: Vec<f64> = (0..n)
            .map(|i| ((trial as f64 + 1.0) * 0.754877 * (i as f64 + 1.0)).sin())
            .collect();
        let w = e.apply(&v);
        let value = me.inner(&w, &v);
        let gv = me.g.mul_vec(&v);
        let scale = w.iter().map(|x| x.abs()).sum::<f64>() * gv.iter().map(|x| x.abs()).sum::<f64>();
        debug_assert!(
            value.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE),
            "T2(Phi v, v) = {value} is not zero"
        );
    }
}

/// `Mᵢⱼ = αⱼ(q, eᵢ)`: the matrix of a velocity-linear form, read off at basis
/// velocities. For `α = i_ḋ Φ₂` this is `Φᵢⱼ(q)`.
pub fn velocity_matrix(f: &ForceForm, q: &[f64]) -> Result<SquareMatrix> {
    let n = f.dim();
    check_dim("velocity matrix point", n, q.len())?;
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let alpha = f.eval(&TangentState::new(q.to_vec(), e))?;
        for j in 0..n {
            m[(i, j)] = alpha.0[j];
        }
    }
    Ok(m)
}

/// Relative tolerance of [`check_velocity_linear`].
pub const LINEARITY_TOL: f64 = 1e-9;

/// Checks `α(q, v) = Mᵀv` and `α(q, a v) = a α(q, v)` at the given state, with
/// `M` from [`velocity_matrix`]. Returns `M` on success.
pub fn check_velocity_linear(f: &ForceForm, s: &TangentState) -> Result<SquareMatrix> {
    let m = velocity_matrix(f, &s.q)?;
    let alpha = f.eval(s)?;
    let predicted = m.transpose().mul_vec(&s.qdot);
    let scale = alpha.norm().max(Covector(predicted.clone()).norm()).max(1.0);
    let mismatch = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
    };
    let err = mismatch(&alpha.0, &predicted);
    if err > LINEARITY_TOL * scale {
        return Err(Error::NotVelocityLinear(format!(
            "alpha(q, v) differs from its basis reconstruction by {err:e}"
        )));
    }
    for a in [2.5, -1.5] {
        let scaled = TangentState::new(s.q.clone(), s.qdot.iter().map(|v| a * v).collect());
        let got = f.eval(&scaled)?;
        let want: Vec<f64> = alpha.0.iter().map(|x| a * x).collect();
        let err = mismatch(&got.0, &want);
        if err > LINEARITY_TOL * scale * a.abs() {
            return Err(Error::NotVelocityLinear(format!(
                "alpha(q, {a} v) differs from {a} alpha(q, v) by {err:e}"
            )));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MetricField;

    fn state(q: &[f64], v: &[f64]) -> TangentState {
        TangentState::new(q.to_vec(), v.to_vec())
    }

    /// Brute-force `αⱼ = Σᵢ q̇ⁱ Φᵢⱼ` over all index pairs from an explicit
    /// antisymmetric coefficient table.
    fn contraction_oracle(phi: &[Vec<f64>], qdot: &[f64]) -> Vec<f64> {
        let n = qdot.len();
        let mut alpha = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                alpha[j] += qdot[i] * phi[i][j];
            }
        }
        alpha
    }

    #[test]
    fn zero_force() {
        let f = ForceForm::zero(3);
        assert_eq!(f.eval(&state(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0])).unwrap(), Covector::zeros(3));
    }

    #[test]
    fn potential_gradients() {
        let chart = Chart::new(&["q1", "q2"]).unwrap();
        let pot = |src: &str| {
            ForceForm::from_potential(Potential::from_expr(&chart, &Expr::parse(src).unwrap()).unwrap())
        };
        let s = state(&[3.0, 7.0], &[0.0, 0.0]);
        assert_eq!(pot("0.5*q1^2").eval(&s).unwrap(), Covector(vec![3.0, 0.0]));
        assert_eq!(pot("4").eval(&s).unwrap(), Covector(vec![0.0, 0.0]));
        let s = state(&[1.0, 2.0], &[0.0, 0.0]);
        assert_eq!(pot("0.5*2*(q1^2+q2^2)").eval(&s).unwrap(), Covector(vec![2.0, 4.0]));
        let s = state(&[3.0, 5.0], &[0.0, 0.0]);
        assert_eq!(pot("q1*q2").eval(&s).unwrap(), Covector(vec![5.0, 3.0]));
        assert_eq!(pot("4").contact_certificate(), Some(ContactCertificate::Zero));
    }

    #[test]
    fn uniform_two_form_matches_oracle() {
        let f = ForceForm::from_two_form(TwoFormField::constant(3, &[(0, 1, 1.0)]).unwrap());
        let v = 0.8;
        let s = state(&[0.0; 3], &[v, 0.0, 0.0]);
        let phi = vec![vec![0.0, 1.0, 0.0], vec![-1.0, 0.0, 0.0], vec![0.0; 3]];
        assert_eq!(f.eval(&s).unwrap().0, contraction_oracle(&phi, &s.qdot));
        assert_eq!(f.eval(&s).unwrap(), Covector(vec![0.0, v, 0.0]));

        let f2 = ForceForm::from_two_form(TwoFormField::constant(2, &[(0, 1, 1.0)]).unwrap());
        let (a, b) = (1.25, -0.5);
        assert_eq!(f2.eval(&state(&[0.0; 2], &[a, b])).unwrap(), Covector(vec![-b, a]));
    }

    #[test]
    fn position_dependent_two_form() {
        let chart = Chart::new(&["x", "y"]).unwrap();
        let phi = TwoFormField::from_exprs(&chart, &[(0, 1, Expr::var("x"))]).unwrap();
        let f = ForceForm::from_two_form(phi);
        let s = state(&[2.0, 0.0], &[0.0, 1.0]);
        let table = vec![vec![0.0, 2.0], vec![-2.0, 0.0]];
        assert_eq!(f.eval(&s).unwrap().0, contraction_oracle(&table, &s.qdot));
        assert_eq!(f.eval(&s).unwrap(), Covector(vec![-2.0, 0.0]));
    }

    #[test]
    fn reversed_index_entry_is_negated() {
        let chart = Chart::new(&["x", "y"]).unwrap();
        let a = TwoFormField::from_exprs(&chart, &[(1, 0, Expr::parse("x+1").unwrap())]).unwrap();
        let m = a.eval(&[1.0, 0.0]).unwrap();
        assert_eq!(m[(1, 0)], 2.0);
        assert_eq!(m[(0, 1)], -2.0);
        let b = TwoFormField::constant(2, &[(1, 0, 3.0)]).unwrap();
        assert_eq!(b.eval(&[0.0, 0.0]).unwrap()[(0, 1)], -3.0);
        assert!(TwoFormField::constant(2, &[(1, 1, 3.0)]).is_err());
    }

    #[test]
    fn contact_residuals() {
        let chart = Chart::new(&["q1", "q2"]).unwrap();
        let u = Potential::from_expr(&chart, &Expr::var("q1")).unwrap();
        let f = ForceForm::from_potential(u);
        assert_eq!(f.contact_residual(&state(&[0.3, 0.1], &[2.0, 0.0])).unwrap(), 2.0);

        let generator = CovectorField::from_exprs(
            &chart,
            &[Expr::var("q2_dot"), Expr::neg(Expr::var("q1_dot"))],
        )
        .unwrap();
        let g = ForceForm::General(generator);
        let (a, b) = (0.7, -1.9);
        assert_eq!(g.contact_residual(&state(&[0.0, 0.0], &[a, b])).unwrap(), 0.0);
    }

    #[test]
    fn is_contact_verdicts() {
        let mut sampler = StateSampler::cube(3, 1.0, 11);
        let two = ForceForm::from_two_form(TwoFormField::constant(3, &[(0, 1, 1.0), (1, 2, -0.3)]).unwrap());
        let v = is_contact(&two, &mut sampler, 1000, ContactTolerance::Absolute(1e-12)).unwrap();
        assert!(v.holds);
        assert_eq!(v.certificate, Some(ContactCertificate::Antisymmetry));

        let chart = Chart::indexed(3);
        let pot = ForceForm::from_potential(Potential::from_expr(&chart, &Expr::var("x0")).unwrap());
        let v = is_contact(&pot, &mut sampler, 100, ContactTolerance::Absolute(1e-12)).unwrap();
        assert!(!v.holds);
        assert!(v.max_abs_residual > 0.1);
        assert_eq!(v.certificate, None);

        let zero = ForceForm::zero(3);
        let v = is_contact(&zero, &mut sampler, 10, ContactTolerance::Normalized(1e-12)).unwrap();
        assert!(v.holds);
        assert_eq!(v.max_abs_residual, 0.0);

        assert!(is_contact(&zero, &mut sampler, 0, ContactTolerance::Absolute(0.0)).is_err());
    }

    #[test]
    fn symbolic_certificate_for_generator() {
        let chart = Chart::new(&["a", "b"]).unwrap();
        // (b_dot, -a_dot) pairs to a_dot*b_dot - b_dot*a_dot: not folded by simplify
        let f = ForceForm::General(
            CovectorField::from_exprs(&chart, &[Expr::Const(0.0), Expr::Const(0.0)]).unwrap(),
        );
        assert_eq!(f.contact_certificate(), Some(ContactCertificate::SymbolicZero));
    }

    #[test]
    fn sampler_is_seeded_and_avoids_zero_section() {
        let mut a = StateSampler::cube(2, 3.0, 5);
        let mut b = StateSampler::cube(2, 3.0, 5);
        for _ in 0..50 {
            let (x, y) = (a.sample(), b.sample());
            assert_eq!(x, y);
            assert!(x.q.iter().all(|v| v.abs() <= 3.0));
            assert!(x.qdot.iter().map(|v| v * v).sum::<f64>().sqrt() >= MIN_SAMPLE_SPEED);
        }
        assert!(StateSampler::new(vec![1.0], vec![0.0], 0).is_err());
    }

    #[test]
    fn endomorphism_euclidean() {
        let me = MetricField::euclidean(3).eval(&[0.0; 3]).unwrap();
        let phi2 = TwoFormField::constant(3, &[(0, 1, 1.0)]).unwrap();
        let e = endomorphism(&phi2, &me, &[0.0; 3]).unwrap();
        assert_eq!(e.apply(&[0.3, 0.4, 0.5]), vec![0.4, -0.3, 0.0]);
        let zero = endomorphism(&TwoFormField::zero(3), &me, &[0.0; 3]).unwrap();
        assert_eq!(zero.phi, SquareMatrix::zeros(3));
    }

    #[test]
    fn endomorphism_minkowski_is_skew() {
        let me = MetricField::minkowski(4).eval(&[0.0; 4]).unwrap();
        let v = [1.0, 1.0, 0.0, 0.0];
        for (i, j) in [(0, 1), (1, 2)] {
            let phi2 = TwoFormField::constant(4, &[(i, j, 1.0)]).unwrap();
            let e = endomorphism(&phi2, &me, &[0.0; 4]).unwrap();
            // oracle: Φˡⱼ = −Σₖ gˡᵏ Φⱼₖ summed by hand over the diagonal inverse
            let ginv = [1.0, -1.0, -1.0, -1.0];
            let table = phi2.eval(&[0.0; 4]).unwrap();
            for l in 0..4 {
                for c in 0..4 {
                    assert_eq!(e.phi[(l, c)], -ginv[l] * table[(c, l)]);
                }
            }
            assert_eq!(me.inner(&e.apply(&v), &v), 0.0);
        }
    }

    #[test]
    fn velocity_matrix_recovers_two_form() {
        let m = SquareMatrix::from_rows(&[
            vec![0.0, 1.5, -2.0],
            vec![-1.5, 0.0, 0.25],
            vec![2.0, -0.25, 0.0],
        ]);
        let f = ForceForm::from_two_form(TwoFormField::from_matrix(&m).unwrap());
        let got = check_velocity_linear(&f, &state(&[0.0; 3], &[0.3, -0.2, 0.9])).unwrap();
        assert_eq!(got, m);
    }

    #[test]
    fn nonlinear_force_is_rejected() {
        let chart = Chart::new(&["x", "y"]).unwrap();
        let f = ForceForm::General(
            CovectorField::from_exprs(
                &chart,
                &[Expr::parse("x_dot^2").unwrap(), Expr::Const(0.0)],
            )
            .unwrap(),
        );
        assert!(matches!(
            check_velocity_linear(&f, &state(&[0.0, 0.0], &[0.5, 0.5])),
            Err(Error::NotVelocityLinear(_))
        ));
    }
}
