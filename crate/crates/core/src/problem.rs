//! Problem instances `ε² y″ = f(x, y)` and the built-in test problems.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use libm::{exp, sqrt};

use crate::error::{invalid, Error, Result};
use crate::hyperbolic::sinh_ratio;

/// Right-hand side `f(x, y)` or its derivative `f_y(x, y)`.
pub type Rhs = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Exact solution `x ↦ y(x)`.
pub type ExactFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Boundary data must match the exact solution to this tolerance.
const BOUNDARY_TOL: f64 = 1e-12;

/// A problem `ε² y″ = f(x, y)` on `(0, 1)` with Dirichlet data.
///
/// `m` is the lower bound of `f_y` and `gamma` the constant with `γ ≥ f_y`
/// that fixes the fitting parameter `β = √γ / ε` of the scheme.
#[derive(Clone)]
pub struct Problem {
    name: String,
    epsilon: f64,
    m: f64,
    gamma: f64,
    f: Rhs,
    f_y: Rhs,
    exact: Option<ExactFn>,
    boundary: (f64, f64),
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("epsilon", &self.epsilon)
            .field("m", &self.m)
            .field("gamma", &self.gamma)
            .field("has_exact", &self.exact.is_some())
            .field("boundary", &self.boundary)
            .finish()
    }
}

impl Problem {
    /// Builds a problem with homogeneous boundary data and no exact solution.
    ///
    /// Fails unless `0 < ε < 1`, `m > 0` and `γ ≥ m`.
    pub fn new<F, Fy>(
        name: impl Into<String>,
        epsilon: f64,
        m: f64,
        gamma: f64,
        f: F,
        f_y: Fy,
    ) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        Fy: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        check_epsilon(epsilon)?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(invalid(
                "m",
                format!("{m} must be a positive finite number"),
            ));
        }
        if !(gamma >= m && gamma.is_finite()) {
            return Err(invalid(
                "gamma",
                format!("{gamma} must satisfy gamma >= m = {m}"),
            ));
        }
        Ok(Problem {
            name: name.into(),
            epsilon,
            m,
            gamma,
            f: Arc::new(f),
            f_y: Arc::new(f_y),
            exact: None,
            boundary: (0.0, 0.0),
        })
    }

    /// Attaches a known exact solution.
    pub fn with_exact<E>(mut self, exact: E) -> Self
    where
        E: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.exact = Some(Arc::new(exact));
        self
    }

    /// Replaces the fitting constant; `f` and the exact solution are untouched.
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if !(gamma >= self.m && gamma.is_finite()) {
            return Err(invalid(
                "gamma",
                format!("{gamma} must satisfy gamma >= m = {}", self.m),
            ));
        }
        self.gamma = gamma;
        Ok(self)
    }

    /// Replaces the homogeneous data `y(0) = y(1) = 0`.
    pub fn with_boundary_values(mut self, left: f64, right: f64) -> Self {
        self.boundary = (left, right);
        self
    }

    /// The ε²y″ = γy oracle with `m = γ`, Dirichlet data `(left, right)` and
    /// exact solution `left·sinh(β(1-x))/sinh β + right·sinh(βx)/sinh β`.
    pub fn linear_gamma(epsilon: f64, gamma: f64, left: f64, right: f64) -> Result<Self> {
        let p = Problem::new(
            "linear-gamma",
            epsilon,
            gamma,
            gamma,
            move |_, y| gamma * y,
            move |_, _| gamma,
        )?;
        let beta = p.beta();
        Ok(p.with_boundary_values(left, right).with_exact(move |x| {
            left * sinh_ratio(beta * (1.0 - x), beta) + right * sinh_ratio(beta * x, beta)
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Fitting parameter `β = √γ / ε`.
    pub fn beta(&self) -> f64 {
        sqrt(self.gamma) / self.epsilon
    }

    #[inline]
    pub fn f(&self, x: f64, y: f64) -> f64 {
        (self.f)(x, y)
    }

    #[inline]
    pub fn f_y(&self, x: f64, y: f64) -> f64 {
        (self.f_y)(x, y)
    }

    /// `ψ(x, y) = f(x, y) - γ y`, the source term left after freezing `γ y`.
    #[inline]
    pub fn psi(&self, x: f64, y: f64) -> f64 {
        self.f(x, y) - self.gamma * y
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `(y(0), y(1))`.
    pub fn boundary_values(&self) -> (f64, f64) {
        self.boundary
    }

    /// Exact solution without range checks; `None` when unknown.
    pub fn exact(&self, x: f64) -> Option<f64> {
        self.exact.as_ref().map(|e| e(x))
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(epsilon))
    }
}

/// Ids accepted by [`builtin_problem`].
pub const BUILTIN_IDS: [&str; 2] = ["paper-test", "linear-gamma"];

/// Registered test problems.
///
/// * `paper-test`: `f(x, y) = y + (1-2x)² - 8ε²`, `m = γ = 1`, with exact
///   solution `(e^{-x/ε} + e^{-(1-x)/ε}) / (1 + e^{-1/ε}) + 4x(1-x) - 1`.
/// * `linear-gamma`: `f(x, y) = y` (γ = m = 1) with zero data, so `y ≡ 0`.
pub fn builtin_problem(id: &str, epsilon: f64) -> Result<Problem> {
    check_epsilon(epsilon)?;
    match id {
        "paper-test" => {
            let eps2 = epsilon * epsilon;
            let p = Problem::new(
                "paper-test",
                epsilon,
                1.0,
                1.0,
                move |x, y| {
                    let s = 1.0 - 2.0 * x;
                    y + s * s - 8.0 * eps2
                },
                |_, _| 1.0,
            )?;
            Ok(p.with_exact(move |x| paper_test_exact(x, epsilon)))
        }
        "linear-gamma" => Problem::linear_gamma(epsilon, 1.0, 0.0, 0.0),
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

/// Exact solution of `paper-test`; all exponents are non-positive on [0, 1].
fn paper_test_exact(x: f64, epsilon: f64) -> f64 {
    let layers = exp(-x / epsilon) + exp(-(1.0 - x) / epsilon);
    layers / (1.0 + exp(-1.0 / epsilon)) + 4.0 * x * (1.0 - x) - 1.0
}

/// Evaluates the exact solution at `x ∈ [0, 1]`.
pub fn exact_eval(p: &Problem, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange {
            x,
            lo: 0.0,
            hi: 1.0,
        });
    }
    p.exact(x).ok_or(Error::MissingExact)
}

/// Tensor grid of `(x, y)` sample points for [`validate_problem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGrid {
    pub nx: usize,
    pub ny: usize,
    pub y_min: f64,
    pub y_max: f64,
}

impl Default for SampleGrid {
    /// 101 × 101 points over `[0, 1] × [-2, 2]`.
    fn default() -> Self {
        SampleGrid {
            nx: 101,
            ny: 101,
            y_min: -2.0,
            y_max: 2.0,
        }
    }
}

impl SampleGrid {
    fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let xs = lin(0.0, 1.0, self.nx);
        xs.flat_map(move |x| lin(self.y_min, self.y_max, self.ny).map(move |y| (x, y)))
    }
}

fn lin(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let n = n.max(1);
    (0..n).map(move |k| {
        if n == 1 {
            a
        } else {
            a + (b - a) * (k as f64) / ((n - 1) as f64)
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub min_fy_sampled: f64,
    pub max_fy_sampled: f64,
    /// Every sample satisfied `f_y ≥ m`.
    pub lower_bound_ok: bool,
    /// Every sample satisfied `m ≤ f_y ≤ γ`.
    pub gamma_ok: bool,
    /// Exact solution (if any) reproduces the boundary data.
    pub boundary_ok: bool,
    pub messages: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.gamma_ok && self.boundary_ok
    }
}

/// Samples `f_y` on `grid` and checks `m ≤ f_y ≤ γ` and the boundary data of
/// the exact solution. A finite sample cannot prove the bounds on `[0,1] × ℝ`;
/// the report says so.
pub fn validate_problem(p: &Problem, grid: &SampleGrid) -> ValidationReport {
    let mut min_fy = f64::INFINITY;
    let mut max_fy = f64::NEG_INFINITY;
    let mut worst_low: Option<(f64, f64, f64)> = None;
    let mut worst_high: Option<(f64, f64, f64)> = None;
    for (x, y) in grid.points() {
        let v = p.f_y(x, y);
        if !(v >= min_fy) {
            min_fy = v;
        }
        if !(v <= max_fy) {
            max_fy = v;
        }
        if !(v >= p.m) && worst_low.is_none_or(|(_, _, w)| v < w) {
            worst_low = Some((x, y, v));
        }
        if !(v <= p.gamma) && worst_high.is_none_or(|(_, _, w)| v > w) {
            worst_high = Some((x, y, v));
        }
    }

    let mut messages = Vec::new();
    messages.push(format!(
        "heuristic check on a {}x{} grid over [0,1]x[{},{}]; not a proof of the bounds",
        grid.nx, grid.ny, grid.y_min, grid.y_max
    ));
    if let Some((x, y, v)) = worst_low {
        messages.push(format!(
            "condition f_y >= m > 0 violated: f_y({x}, {y}) = {v} < m = {}",
            p.m
        ));
    }
    if let Some((x, y, v)) = worst_high {
        messages.push(format!(
            "condition gamma >= f_y violated: f_y({x}, {y}) = {v} > gamma = {}",
            p.gamma
        ));
    }

    let boundary_ok = match &p.exact {
        None => true,
        Some(e) => {
            let (l, r) = p.boundary;
            let (e0, e1) = (e(0.0), e(1.0));
            let ok = (e0 - l).abs() <= BOUNDARY_TOL && (e1 - r).abs() <= BOUNDARY_TOL;
            if !ok {
                messages.push(format!(
                    "exact solution gives y(0) = {e0}, y(1) = {e1}; boundary data is ({l}, {r})"
                ));
            }
            ok
        }
    };

    ValidationReport {
        min_fy_sampled: min_fy,
        max_fy_sampled: max_fy,
        lower_bound_ok: worst_low.is_none(),
        gamma_ok: worst_low.is_none() && worst_high.is_none(),
        boundary_ok,
        messages,
    }
}
