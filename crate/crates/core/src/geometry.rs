//! Charts, tangent states and the pointwise geometry of a metric: inverse,
//! first derivatives, Christoffel symbols, kinetic energy, momentum, and the
//! dotted pairing `α̇ = αᵢ q̇ⁱ`.
//!
//! A metric is given by its components `g_jk(q)` for `j <= k` only, so
//! symmetry holds by construction. Component derivatives come from symbolic
//! differentiation when the component is an expression and from central
//! differences when it is a native closure.
//!
//! Signs are never adjusted: with a pseudo-Riemannian metric the kinetic
//! energy may be negative or zero.

use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::expr::{BoundExpr, Expr, ExprError};
use crate::linalg::{invert, SquareMatrix};

/// Suffix that turns a coordinate name into its velocity name (`x` -> `x_dot`).
pub const VELOCITY_SUFFIX: &str = "_dot";

/// Degeneracy threshold, relative to the product of the row max-abs of `g`.
pub const SINGULAR_RELATIVE_DET: f64 = 1e-12;

/// A single coordinate chart: ordered coordinate names and derived velocity names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    coordinates: Vec<String>,
    velocities: Vec<String>,
}

impl Chart {
    pub fn new<S: AsRef<str>>(coordinates: &[S]) -> Result<Chart> {
        if coordinates.is_empty() {
            return Err(Error::Chart("at least one coordinate is required".into()));
        }
        let coordinates: Vec<String> = coordinates.iter().map(|s| s.as_ref().to_string()).collect();
        for name in &coordinates {
            let mut chars = name.chars();
            let valid_start = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
            if !valid_start || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Chart(format!("`{name}` is not an identifier")));
            }
        }
        let velocities: Vec<String> = coordinates
            .iter()
            .map(|c| format!("{c}{VELOCITY_SUFFIX}"))
            .collect();
        let mut all: Vec<&String> = coordinates.iter().chain(&velocities).collect();
        all.sort();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Chart(format!("name `{}` is declared twice", w[0])));
        }
        Ok(Chart {
            coordinates,
            velocities,
        })
    }

    /// Chart with coordinates `x0, x1, ...`.
    pub fn indexed(n: usize) -> Chart {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        Chart::new(&names).expect("indexed names are valid")
    }

    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn velocities(&self) -> &[String] {
        &self.velocities
    }

    pub fn coordinate_slots(&self) -> Vec<&str> {
        self.coordinates.iter().map(String::as_str).collect()
    }

    /// Coordinates followed by velocities; the slot order of phase-space functions.
    pub fn phase_slots(&self) -> Vec<&str> {
        self.coordinates
            .iter()
            .chain(&self.velocities)
            .map(String::as_str)
            .collect()
    }

    pub fn index_of(&self, coordinate: &str) -> Option<usize> {
        self.coordinates.iter().position(|c| c == coordinate)
    }
}

/// A point of the tangent bundle: base coordinates and velocity components.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentState {
    pub q: Vec<f64>,
    pub qdot: Vec<f64>,
}

impl TangentState {
    /// # Panics
    /// If `q` and `qdot` differ in length.
    pub fn new(q: Vec<f64>, qdot: Vec<f64>) -> Self {
        assert_eq!(q.len(), qdot.len(), "q and qdot must have equal length");
        TangentState { q, qdot }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// `[q..., qdot...]`, matching [`Chart::phase_slots`].
    pub fn phase_values(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.dim());
        v.extend_from_slice(&self.q);
        v.extend_from_slice(&self.qdot);
        v
    }
}

/// Covector components at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector(pub Vec<f64>);

impl Covector {
    pub fn zeros(n: usize) -> Self {
        Covector(vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `α̇(s) = αᵢ q̇ⁱ`: the value of a horizontal form on the tautological field.
pub fn dotted_pairing(alpha: &Covector, s: &TangentState) -> Result<f64> {
    check_dim("dotted pairing", alpha.dim(), s.dim())?;
    Ok(alpha.0.iter().zip(&s.qdot).map(|(a, v)| a * v).sum())
}

type NativeFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A scalar function of a slot vector (coordinates, or coordinates and velocities).
#[derive(Clone)]
pub enum ScalarFn {
    Const(f64),
    Expr(BoundExpr),
    Native(NativeFn),
}

impl ScalarFn {
    pub fn native(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFn::Native(Arc::new(f))
    }

    /// Binds `e` to `slots`, collapsing constant expressions.
    pub fn from_expr(e: &Expr, slots: &[&str]) -> Result<Self> {
        let e = e.simplify();
        if let Some(c) = e.as_const() {
            return Ok(ScalarFn::Const(c));
        }
        Ok(ScalarFn::Expr(BoundExpr::bind(&e, slots)?))
    }

    pub fn eval(&self, values: &[f64]) -> Result<f64> {
        match self {
            ScalarFn::Const(c) => Ok(*c),
            ScalarFn::Expr(b) => Ok(b.eval(values)?),
            ScalarFn::Native(f) => {
                let v = f(values);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(ExprError::Domain(format!("native function returned {v}")).into())
                }
            }
        }
    }

    pub fn negated(self) -> ScalarFn {
        match self {
            ScalarFn::Const(c) => ScalarFn::Const(-c),
            ScalarFn::Expr(b) => ScalarFn::Expr(b.negated()),
            ScalarFn::Native(f) => ScalarFn::native(move |q| -f(q)),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ScalarFn::Const(c) if *c == 0.0)
    }

    pub fn as_expr(&self) -> Option<Expr> {
        match self {
            ScalarFn::Const(c) => Some(Expr::Const(*c)),
            ScalarFn::Expr(b) => Some(b.source().clone()),
            ScalarFn::Native(_) => None,
        }
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Const(c) => write!(f, "Const({c})"),
            ScalarFn::Expr(b) => write!(f, "Expr({})", b.source()),
            ScalarFn::Native(_) => f.write_str("Native(..)"),
        }
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Const(c) => write!(f, "{c}"),
            ScalarFn::Expr(b) => write!(f, "{}", b.source()),
            ScalarFn::Native(_) => f.write_str("<native>"),
        }
    }
}

#[derive(Debug, Clone)]
struct Component {
    value: ScalarFn,
    /// `∂ᵢ` of the component for each coordinate; `None` means central differences.
    gradient: Option<Vec<ScalarFn>>,
}

/// The metric `T₂ = g_jk dqʲ dqᵏ` as functions of the coordinates.
#[derive(Debug, Clone)]
pub struct MetricField {
    dim: usize,
    /// Upper triangle, row-major: (0,0), (0,1), ..., (0,n-1), (1,1), ...
    upper: Vec<Component>,
    label: String,
}

fn upper_index(n: usize, j: usize, k: usize) -> usize {
    let (j, k) = if j <= k { (j, k) } else { (k, j) };
    j * n - j * (j + 1) / 2 + k
}

impl MetricField {
    /// Builds an expression-backed metric. Entries are `(j, k, g_jk)`; `(k, j)`
    /// names the same component. Omitted components are zero.
    pub fn from_exprs(chart: &Chart, entries: &[(usize, usize, Expr)]) -> Result<MetricField> {
        let n = chart.dim();
        let slots = chart.coordinate_slots();
        let mut exprs = vec![Expr::Const(0.0); n * (n + 1) / 2];
        for (j, k, e) in entries {
            if *j >= n || *k >= n {
                return Err(Error::InvalidArgument(format!(
                    "metric component ({j}, {k}) outside dimension {n}"
                )));
            }
            exprs[upper_index(n, *j, *k)] = e.clone();
        }
        let upper = exprs
            .iter()
            .map(|e| {
                let value = ScalarFn::from_expr(e, &slots)?;
                let gradient = slots
                    .iter()
                    .map(|v| ScalarFn::from_expr(&e.differentiate(v)?, &slots))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Component {
                    value,
                    gradient: Some(gradient),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MetricField {
            dim: n,
            upper,
            label: describe_exprs(chart, &exprs),
        })
    }

    /// Builds a metric from a native closure `g(j, k, q)`, called with `j <= k`.
    /// Derivatives use central differences.
    pub fn from_fn(
        dim: usize,
        label: impl Into<String>,
        g: impl Fn(usize, usize, &[f64]) -> f64 + Send + Sync + 'static,
    ) -> MetricField {
        let g = Arc::new(g);
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for j in 0..dim {
            for k in j..dim {
                let g = Arc::clone(&g);
                upper.push(Component {
                    value: ScalarFn::native(move |q| g(j, k, q)),
                    gradient: None,
                });
            }
        }
        MetricField {
            dim,
            upper,
            label: label.into(),
        }
    }

    /// Constant diagonal metric.
    pub fn diagonal(signs: &[f64]) -> MetricField {
        let n = signs.len();
        let mut upper = Vec::with_capacity(n * (n + 1) / 2);
        for j in 0..n {
            for k in j..n {
                let v = if j == k { signs[j] } else { 0.0 };
                upper.push(Component {
                    value: ScalarFn::Const(v),
                    gradient: Some(vec![ScalarFn::Const(0.0); n]),
                });
            }
        }
        let label = format!(
            "diag({})",
            signs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
        );
        MetricField {
            dim: n,
            upper,
            label,
        }
    }

    pub fn euclidean(n: usize) -> MetricField {
        let mut m = Self::diagonal(&vec![1.0; n]);
        m.label = format!("euclidean {n}D");
        m
    }

    /// `diag(1, -1, ..., -1)`: the first coordinate is time-like.
    pub fn minkowski(n: usize) -> MetricField {
        let signs: Vec<f64> = (0..n).map(|i| if i == 0 { 1.0 } else { -1.0 }).collect();
        let mut m = Self::diagonal(&signs);
        m.label = format!("minkowski {n}D {}", m.label);
        m
    }

    /// The flat plane in polar coordinates `(r, theta)`: `diag(1, r^2)`.
    pub fn polar() -> MetricField {
        let chart = Chart::new(&["r", "theta"]).expect("valid chart");
        let r2 = Expr::parse("r^2").expect("valid expression");
        Self::from_exprs(&chart, &[(0, 0, Expr::Const(1.0)), (1, 1, r2)]).expect("valid metric")
    }

    /// Conformally flat metric `(1 + k |q|²) δ_jk` on the chart.
    pub fn conformal(chart: &Chart, k: f64) -> MetricField {
        let sum = chart
            .coordinates()
            .iter()
            .map(|c| format!("{c}^2"))
            .collect::<Vec<_>>()
            .join(" + ");
        let factor = Expr::parse(&format!("1 + {k}*({sum})")).expect("valid expression");
        let entries: Vec<_> = (0..chart.dim()).map(|i| (i, i, factor.clone())).collect();
        Self::from_exprs(chart, &entries).expect("valid metric")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// True when every component derivative is symbolic.
    pub fn is_symbolic(&self) -> bool {
        self.upper.iter().all(|c| c.gradient.is_some())
    }

    /// Metric components only, without derivatives or inverse.
    pub fn components(&self, q: &[f64]) -> Result<SquareMatrix> {
        check_dim("metric evaluation point", self.dim, q.len())?;
        let n = self.dim;
        let mut g = SquareMatrix::zeros(n);
        for j in 0..n {
            for k in j..n {
                let v = self.upper[upper_index(n, j, k)].value.eval(q)?;
                g[(j, k)] = v;
                g[(k, j)] = v;
            }
        }
        Ok(g)
    }

    /// Evaluates `g`, its inverse, determinant and first derivatives at `q`.
    pub fn eval(&self, q: &[f64]) -> Result<MetricEval> {
        let n = self.dim;
        let g = self.components(q)?;
        let threshold = SINGULAR_RELATIVE_DET * g.row_scale();
        let inversion = invert(&g).ok_or(Error::SingularMetric { det: 0.0, threshold })?;
        if !(inversion.det.abs() >= threshold) || inversion.det == 0.0 {
            return Err(Error::SingularMetric {
                det: inversion.det,
                threshold,
            });
        }

        let mut dg = vec![0.0; n * n * n];
        let mut shifted = q.to_vec();
        for j in 0..n {
            for k in j..n {
                let comp = &self.upper[upper_index(n, j, k)];
                for i in 0..n {
                    let d = match &comp.gradient {
                        Some(grad) => grad[i].eval(q)?,
                        None => {
                            let h = 1e-6 * q[i].abs().max(1.0);
                            shifted[i] = q[i] + h;
                            let plus = comp.value.eval(&shifted)?;
                            shifted[i] = q[i] - h;
                            let minus = comp.value.eval(&shifted)?;
                            shifted[i] = q[i];
                            (plus - minus) / (2.0 * h)
                        }
                    };
                    dg[(i * n + j) * n + k] = d;
                    dg[(i * n + k) * n + j] = d;
                }
            }
        }
        Ok(MetricEval {
            g,
            g_inv: inversion.inverse,
            dg,
            det: inversion.det,
        })
    }
}

fn describe_exprs(chart: &Chart, upper: &[Expr]) -> String {
    let n = chart.dim();
    let names = chart.coordinates();
    let mut parts = Vec::new();
    for j in 0..n {
        for k in j..n {
            let e = &upper[upper_index(n, j, k)];
            if !e.is_const(0.0) {
                parts.push(format!("g({},{}) = {}", names[j], names[k], e));
            }
        }
    }
    parts.join("; ")
}

/// Metric data at one point.
#[derive(Debug, Clone)]
pub struct MetricEval {
    pub g: SquareMatrix,
    pub g_inv: SquareMatrix,
    /// `dg[(i*n + j)*n + k] = ∂ᵢ g_jk`; see [`MetricEval::dg`].
    dg: Vec<f64>,
    pub det: f64,
}

impl MetricEval {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// `∂ᵢ g_jk`.
    pub fn dg(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim();
        self.dg[(i * n + j) * n + k]
    }

    /// Levi-Civita connection `Γˡᵢⱼ = ½ gˡᵏ (∂ᵢ g_jk + ∂ⱼ g_ik − ∂ₖ g_ij)`.
    pub fn christoffel(&self) -> ChristoffelEval {
        let n = self.dim();
        let mut gamma = vec![0.0; n * n * n];
        // lowered symbols Γ_kij for i <= j
        let mut lowered = vec![0.0; n];
        for i in 0..n {
            for j in i..n {
                for (k, slot) in lowered.iter_mut().enumerate() {
                    *slot = 0.5 * (self.dg(i, j, k) + self.dg(j, i, k) - self.dg(k, i, j));
                }
                for l in 0..n {
                    let v: f64 = (0..n).map(|k| self.g_inv[(l, k)] * lowered[k]).sum();
                    gamma[(l * n + i) * n + j] = v;
                    gamma[(l * n + j) * n + i] = v;
                }
            }
        }
        ChristoffelEval { n, gamma }
    }

    /// `T = ½ g_ij q̇ⁱ q̇ʲ`.
    pub fn kinetic_energy(&self, s: &TangentState) -> Result<f64> {
        check_dim("kinetic energy", self.dim(), s.dim())?;
        Ok(0.5 * self.g.bilinear(&s.qdot, &s.qdot))
    }

    /// `p_j = g_jk q̇ᵏ`, the Liouville form at `s`.
    pub fn momentum(&self, s: &TangentState) -> Result<Covector> {
        check_dim("momentum", self.dim(), s.dim())?;
        Ok(Covector(self.g.mul_vec(&s.qdot)))
    }

    /// `T₂(u, v)`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.g.bilinear(u, v)
    }

    /// Raises an index: `gˡᵏ αₖ`.
    pub fn raise(&self, alpha: &Covector) -> Vec<f64> {
        self.g_inv.mul_vec(&alpha.0)
    }
}

/// Christoffel symbols at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelEval {
    n: usize,
    gamma: Vec<f64>,
}

impl ChristoffelEval {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `Γˡᵢⱼ`.
    pub fn get(&self, l: usize, i: usize, j: usize) -> f64 {
        self.gamma[(l * self.n + i) * self.n + j]
    }

    /// `Γˡᵢⱼ vⁱ vʲ` for each `l`.
    pub fn contract(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|l| {
                let mut acc = 0.0;
                for i in 0..n {
                    if v[i] == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        acc += self.get(l, i, j) * v[i] * v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn euclidean_is_trivial() {
        let me = MetricField::euclidean(2).eval(&[0.3, -4.0]).unwrap();
        assert_eq!(me.g, SquareMatrix::identity(2));
        assert_eq!(me.g_inv, SquareMatrix::identity(2));
        assert!((0..8).all(|i| me.dg[i] == 0.0));
        assert_eq!(me.christoffel().max_abs(), 0.0);
    }

    #[test]
    fn polar_metric_at_r2() {
        let me = MetricField::polar().eval(&[2.0, 0.7]).unwrap();
        assert_eq!(me.g[(1, 1)], 4.0);
        assert_eq!(me.g_inv[(1, 1)], 0.25);
        // ∂_r (r²) = 2r = 4
        assert_eq!(me.dg(0, 1, 1), 4.0);
        assert_eq!(me.dg(1, 1, 1), 0.0);
    }

    #[test]
    fn polar_christoffel_hand_values() {
        // Γʳ_θθ = -r, Γ^θ_rθ = 1/r from the Levi-Civita formula with g = diag(1, r²)
        let gamma = MetricField::polar().eval(&[2.0, 0.0]).unwrap().christoffel();
        assert!(close(gamma.get(0, 1, 1), -2.0, 1e-15));
        assert!(close(gamma.get(1, 0, 1), 0.5, 1e-15));
        assert!(close(gamma.get(1, 1, 0), 0.5, 1e-15));
        for (l, i, j) in [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)] {
            assert_eq!(gamma.get(l, i, j), 0.0);
        }
    }

    #[test]
    fn degenerate_metric_rejected() {
        let m = MetricField::diagonal(&[1.0, 0.0]);
        assert!(matches!(m.eval(&[1.0, 1.0]), Err(Error::SingularMetric { .. })));
    }

    #[test]
    fn nearly_degenerate_metric_rejected_relative_to_scale() {
        let m = MetricField::diagonal(&[1e6, 1e-8]);
        // det = 1e-2, scale = 1e-2: fine
        assert!(m.eval(&[0.0, 0.0]).is_ok());
        let chart = Chart::new(&["a", "b"]).unwrap();
        let m = MetricField::from_exprs(
            &chart,
            &[
                (0, 0, Expr::Const(1.0)),
                (0, 1, Expr::Const(1.0)),
                (1, 1, Expr::parse("1 + a").unwrap()),
            ],
        )
        .unwrap();
        assert!(matches!(m.eval(&[1e-14, 0.0]), Err(Error::SingularMetric { .. })));
        assert!(m.eval(&[0.5, 0.0]).is_ok());
    }

    #[test]
    fn kinetic_energy_and_momentum() {
        let e = MetricField::euclidean(2).eval(&[0.0, 0.0]).unwrap();
        let s = TangentState::new(vec![0.0, 0.0], vec![3.0, 4.0]);
        assert_eq!(e.kinetic_energy(&s).unwrap(), 12.5);
        assert_eq!(e.momentum(&s).unwrap(), Covector(vec![3.0, 4.0]));

        let m = MetricField::minkowski(4).eval(&[0.0; 4]).unwrap();
        let timelike = TangentState::new(vec![0.0; 4], vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(m.kinetic_energy(&timelike).unwrap(), 0.5);
        let null = TangentState::new(vec![0.0; 4], vec![1.0, 1.0, 0.0, 0.0]);
        assert_eq!(m.kinetic_energy(&null).unwrap(), 0.0);
        assert_eq!(m.momentum(&null).unwrap(), Covector(vec![1.0, -1.0, 0.0, 0.0]));

        let p = MetricField::polar().eval(&[2.0, 0.0]).unwrap();
        let s = TangentState::new(vec![2.0, 0.0], vec![1.0, 3.0]);
        assert_eq!(p.momentum(&s).unwrap(), Covector(vec![1.0, 12.0]));
    }

    #[test]
    fn dotted_pairing_examples() {
        let s = TangentState::new(vec![0.0, 0.0], vec![5.0, 0.0]);
        assert_eq!(dotted_pairing(&Covector(vec![0.0, 1.0]), &s).unwrap(), 0.0);
        // local contact generator q̇²dq¹ − q̇¹dq² at q̇ = (2, 3)
        let s = TangentState::new(vec![0.0, 0.0], vec![2.0, 3.0]);
        let generator = Covector(vec![s.qdot[1], -s.qdot[0]]);
        assert_eq!(generator, Covector(vec![3.0, -2.0]));
        assert_eq!(dotted_pairing(&generator, &s).unwrap(), 0.0);
        assert_eq!(dotted_pairing(&Covector(vec![1.0, 0.0]), &s).unwrap(), 2.0);
        assert!(dotted_pairing(&Covector(vec![1.0]), &s).is_err());
    }

    #[test]
    fn chart_rejects_collisions() {
        assert!(Chart::new(&["x", "x_dot"]).is_err());
        assert!(Chart::new(&["x", "x"]).is_err());
        assert!(Chart::new(&["1x"]).is_err());
        let c = Chart::new(&["r", "theta"]).unwrap();
        assert_eq!(c.phase_slots(), ["r", "theta", "r_dot", "theta_dot"]);
    }

    #[test]
    fn native_metric_uses_finite_differences() {
        let m = MetricField::from_fn(2, "polar native", |j, k, q| match (j, k) {
            (0, 0) => 1.0,
            (1, 1) => q[0] * q[0],
            _ => 0.0,
        });
        assert!(!m.is_symbolic());
        let me = m.eval(&[2.0, 0.0]).unwrap();
        assert!(close(me.dg(0, 1, 1), 4.0, 1e-8));
    }
}
