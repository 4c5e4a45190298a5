//! Fitted three-point scheme and its Newton solver.
//!
//! Row `i` of the discrete operator (`i = 1, …, N-1`) reads
//!
//! ```text
//! (Fȳ)_i = γ/(Δd_i + Δd_{i+1}) · [ (a_i+d_i)/2 ȳ_{i-1}
//!            - ((a_i+d_i)/2 + (a_{i+1}+d_{i+1})/2) ȳ_i + (a_{i+1}+d_{i+1})/2 ȳ_{i+1}
//!            - (Δd_i/γ) f̄_{i-1} - (Δd_{i+1}/γ) f̄_i ]
//! ```
//!
//! with `(Fȳ)_0 = (Fȳ)_N = 0` and `f̄_j = f((x_j+x_{j+1})/2, (ȳ_j+ȳ_{j+1})/2)`.
//! The coefficients of row `i` carrying subscript `i` belong to the interval
//! `[x_{i-1}, x_i]` and those with subscript `i+1` to `[x_i, x_{i+1}]`; with this
//! pairing the scheme is exact for `e^{±βx}` on arbitrary meshes.

use alloc::vec;
use alloc::vec::Vec;

use libm::{cosh, sinh, tanh};

use crate::error::{invalid, Error, Result};
use crate::mesh::Mesh;
use crate::problem::Problem;

/// Above this value of `βh` the coefficients are replaced by their limits
/// `a = 0`, `d = 1`, `Δd = 1`; the absolute error is below `2e^{-350} < 1e-150`.
pub const ASYMPTOTIC_THRESHOLD: f64 = 350.0;

/// Hyperbolic coefficients of one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalCoefficients {
    /// `1 / sinh(βh)`
    pub a: f64,
    /// `1 / tanh(βh)`
    pub d: f64,
    /// `d - a`, stored as `tanh(βh/2)`.
    pub delta_d: f64,
    pub beta_h: f64,
}

impl IntervalCoefficients {
    /// `a + d = coth(βh/2)`.
    pub fn a_plus_d(&self) -> f64 {
        if self.beta_h > ASYMPTOTIC_THRESHOLD {
            1.0
        } else {
            1.0 / self.delta_d
        }
    }
}

/// Coefficients `a = csch(βh)`, `d = coth(βh)`, `Δd = tanh(βh/2)`.
pub fn interval_coefficients(beta: f64, h: f64) -> Result<IntervalCoefficients> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid("beta", alloc::format!("{beta} must be positive")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid("h", alloc::format!("{h} must be positive")));
    }
    Ok(coefficients_for(beta * h))
}

fn coefficients_for(z: f64) -> IntervalCoefficients {
    if z > ASYMPTOTIC_THRESHOLD {
        IntervalCoefficients {
            a: 0.0,
            d: 1.0,
            delta_d: 1.0,
            beta_h: z,
        }
    } else {
        IntervalCoefficients {
            a: 1.0 / sinh(z),
            d: 1.0 / tanh(z),
            delta_d: tanh(0.5 * z),
            beta_h: z,
        }
    }
}

/// Textbook evaluation `d = cosh/sinh`, `a = 1/sinh`, `Δd = d - a` without the
/// half-angle form or the asymptotic branch. Loses all accuracy in `Δd` for
/// small `βh` and returns NaN once `sinh` overflows; kept as a reference for
/// the property checks.
pub fn interval_coefficients_naive(beta: f64, h: f64) -> IntervalCoefficients {
    let z = beta * h;
    let s = sinh(z);
    let a = 1.0 / s;
    let d = cosh(z) / s;
    IntervalCoefficients {
        a,
        d,
        delta_d: d - a,
        beta_h: z,
    }
}

/// `max_i |u_i|`.
pub fn max_norm(u: &[f64]) -> f64 {
    u.iter().fold(0.0, |acc, v| {
        let a = v.abs();
        if a > acc || a.is_nan() {
            a
        } else {
            acc
        }
    })
}

/// Row weights of the scaled operator, one entry per interior row.
#[derive(Debug, Clone)]
struct Stencil {
    /// `γ/(Δd_i + Δd_{i+1}) · (a_i + d_i)/2`
    left: Vec<f64>,
    /// `γ/(Δd_i + Δd_{i+1}) · (a_{i+1} + d_{i+1})/2`
    right: Vec<f64>,
    /// `Δd_i / (Δd_i + Δd_{i+1})`
    src_left: Vec<f64>,
    /// `Δd_{i+1} / (Δd_i + Δd_{i+1})`
    src_right: Vec<f64>,
    /// Interval midpoints.
    mid: Vec<f64>,
}

impl Stencil {
    fn new(p: &Problem, mesh: &Mesh) -> Self {
        let beta = p.beta();
        let gamma = p.gamma();
        let x = mesh.nodes();
        let coef: Vec<IntervalCoefficients> = mesh
            .h()
            .iter()
            .map(|&h| coefficients_for(beta * h))
            .collect();
        let rows = mesh.n() - 1;
        let mut st = Stencil {
            left: Vec::with_capacity(rows),
            right: Vec::with_capacity(rows),
            src_left: Vec::with_capacity(rows),
            src_right: Vec::with_capacity(rows),
            mid: x.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect(),
        };
        for i in 1..mesh.n() {
            let (l, r) = (&coef[i - 1], &coef[i]);
            let denom = l.delta_d + r.delta_d;
            let scale = gamma / denom;
            st.left.push(0.5 * scale * l.a_plus_d());
            st.right.push(0.5 * scale * r.a_plus_d());
            st.src_left.push(l.delta_d / denom);
            st.src_right.push(r.delta_d / denom);
        }
        st
    }
}

fn check_len(mesh: &Mesh, ybar: &[f64]) -> Result<()> {
    if ybar.len() != mesh.n() + 1 {
        return Err(Error::LengthMismatch {
            expected: mesh.n() + 1,
            found: ybar.len(),
        });
    }
    Ok(())
}

fn fbar(p: &Problem, st: &Stencil, ybar: &[f64]) -> Vec<f64> {
    st.mid
        .iter()
        .zip(ybar.windows(2))
        .map(|(&xm, w)| p.f(xm, 0.5 * (w[0] + w[1])))
        .collect()
}

fn residual_with(p: &Problem, st: &Stencil, ybar: &[f64]) -> Vec<f64> {
    let n = ybar.len() - 1;
    let fb = fbar(p, st, ybar);
    let mut out = vec![0.0; n + 1];
    for i in 1..n {
        let r = i - 1;
        out[i] = st.left[r] * ybar[i - 1] - (st.left[r] + st.right[r]) * ybar[i]
            + st.right[r] * ybar[i + 1]
            - st.src_left[r] * fb[i - 1]
            - st.src_right[r] * fb[i];
    }
    out
}

/// `(Fȳ)_0, …, (Fȳ)_N`.
pub fn residual(p: &Problem, mesh: &Mesh, ybar: &[f64]) -> Result<Vec<f64>> {
    check_len(mesh, ybar)?;
    Ok(residual_with(p, &Stencil::new(p, mesh), ybar))
}

/// Tridiagonal system `A x = rhs`; row `k` couples `x_{k-1}, x_k, x_{k+1}`.
/// `sub[0]` and `sup[len-1]` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        for len in [sub.len(), sup.len(), rhs.len()] {
            if len != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        Ok(TridiagonalSystem {
            sub,
            diag,
            sup,
            rhs,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|k| {
                let mut v = self.diag[k] * x[k];
                if k > 0 {
                    v += self.sub[k] * x[k - 1];
                }
                if k + 1 < n {
                    v += self.sup[k] * x[k + 1];
                }
                v
            })
            .collect()
    }
}

fn jacobian_with(p: &Problem, st: &Stencil, ybar: &[f64], f: &[f64]) -> TridiagonalSystem {
    let n = ybar.len() - 1;
    // ½ f_y at each interval midpoint
    let half_fy: Vec<f64> = st
        .mid
        .iter()
        .zip(ybar.windows(2))
        .map(|(&xm, w)| 0.5 * p.f_y(xm, 0.5 * (w[0] + w[1])))
        .collect();
    let rows = n - 1;
    let mut sys = TridiagonalSystem {
        sub: vec![0.0; rows],
        diag: vec![0.0; rows],
        sup: vec![0.0; rows],
        rhs: vec![0.0; rows],
    };
    for i in 1..n {
        let r = i - 1;
        let gl = st.src_left[r] * half_fy[i - 1];
        let gr = st.src_right[r] * half_fy[i];
        sys.sub[r] = st.left[r] - gl;
        sys.diag[r] = -(st.left[r] + st.right[r]) - gl - gr;
        sys.sup[r] = st.right[r] - gr;
        sys.rhs[r] = -f[i];
    }
    sys
}

/// Analytic Jacobian of `F` with respect to the interior unknowns
/// `ȳ_1 … ȳ_{N-1}`; `rhs` holds `-(Fȳ)_1 … -(Fȳ)_{N-1}` (the Newton system).
pub fn jacobian(p: &Problem, mesh: &Mesh, ybar: &[f64]) -> Result<TridiagonalSystem> {
    check_len(mesh, ybar)?;
    let st = Stencil::new(p, mesh);
    let f = residual_with(p, &st, ybar);
    Ok(jacobian_with(p, &st, ybar, &f))
}

/// Thomas elimination without pivoting.
pub fn solve_tridiagonal(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    let n = sys.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = sys.diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::SingularPivot { row: 0 });
    }
    c[0] = sys.sup[0] / pivot;
    d[0] = sys.rhs[0] / pivot;
    for k in 1..n {
        pivot = sys.diag[k] - sys.sub[k] * c[k - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularPivot { row: k });
        }
        c[k] = if k + 1 < n { sys.sup[k] / pivot } else { 0.0 };
        d[k] = (sys.rhs[k] - sys.sub[k] * d[k - 1]) / pivot;
    }
    for k in (0..n - 1).rev() {
        d[k] -= c[k] * d[k + 1];
    }
    Ok(d)
}

/// Starting vector for Newton's method.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialGuess {
    /// Same value at every interior node.
    Constant(f64),
    /// Full vector of length `N + 1`; boundary entries are overwritten.
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOptions {
    /// Stop once `‖Fȳ‖∞ ≤ tol`, or once a Newton step satisfies
    /// `‖δ‖∞ ≤ tol (1 + ‖ȳ‖∞)` (the residual has hit its rounding floor).
    pub tol: f64,
    pub max_iter: usize,
    pub initial_guess: InitialGuess,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-12,
            max_iter: 50,
            initial_guess: InitialGuess::Constant(-0.5),
        }
    }
}

impl NewtonOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(invalid(
                "tol",
                alloc::format!("{} must be positive", self.tol),
            ));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter", "must be at least 1"));
        }
        Ok(())
    }
}

/// Nodal solution with solver telemetry.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSolution {
    pub mesh: Mesh,
    pub ybar: Vec<f64>,
    /// Newton updates performed.
    pub iterations: usize,
    /// `‖Fȳ‖∞` at the returned iterate.
    pub final_residual: f64,
    pub converged: bool,
    /// `‖Fȳ‖∞` before each update and at the returned iterate.
    pub residual_history: Vec<f64>,
}

/// Plain Newton iteration `J(ȳ) δ = -F(ȳ)`, `ȳ ← ȳ + δ`, with the boundary
/// entries pinned to the Dirichlet data. On fine meshes with `βh ≪ 1` the row
/// weights grow like `1/h²` and `‖F‖∞` bottoms out near `1e-12`, hence the
/// step-size test in [`NewtonOptions::tol`]. Running out of iterations is reported
/// through `converged = false`; a singular Jacobian is an error.
pub fn newton_solve(p: &Problem, mesh: &Mesh, opts: &NewtonOptions) -> Result<DiscreteSolution> {
    opts.validate()?;
    let n = mesh.n();
    let mut y = match &opts.initial_guess {
        InitialGuess::Constant(c) => vec![*c; n + 1],
        InitialGuess::Values(v) => {
            check_len(mesh, v)?;
            v.clone()
        }
    };
    let (left, right) = p.boundary_values();
    y[0] = left;
    y[n] = right;

    let st = Stencil::new(p, mesh);
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut f = residual_with(p, &st, &y);
    let mut norm = max_norm(&f);
    history.push(norm);
    let mut converged = norm <= opts.tol;
    while !converged && iterations < opts.max_iter && norm.is_finite() {
        let sys = jacobian_with(p, &st, &y, &f);
        let delta = solve_tridiagonal(&sys)?;
        for (yi, di) in y[1..n].iter_mut().zip(&delta) {
            *yi += di;
        }
        iterations += 1;
        f = residual_with(p, &st, &y);
        norm = max_norm(&f);
        history.push(norm);
        converged = norm <= opts.tol || max_norm(&delta) <= opts.tol * (1.0 + max_norm(&y));
    }

    Ok(DiscreteSolution {
        mesh: mesh.clone(),
        ybar: y,
        iterations,
        final_residual: norm,
        converged,
        residual_history: history,
    })
}
