//! Global approximations built from the nodal solution.
//!
//! On `[x_i, x_{i+1}]` the exponential piece is
//!
//! ```text
//! ỹ_i(x) = ȳ_i u_I(x) + ȳ_{i+1} u_II(x) + ψ̄_i ∫ G_i(x, s) ds
//! ```
//!
//! where `u_I`, `u_II` are the `sinh` ratios solving `ε²u″ = γu` with unit data
//! at one end and `G_i` is the interval Green's function of `ε²u″ - γu`. The
//! repaired solution keeps these pieces inside the layers and switches to the
//! piecewise-linear interpolant of `ȳ` on `[λ, 1-λ]`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hyperbolic::{sinh_defect, sinh_ratio};
use crate::mesh::Mesh;
use crate::problem::Problem;
use crate::scheme::DiscreteSolution;

/// Green's function data for one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenKernel {
    pub beta: f64,
    pub left: f64,
    pub right: f64,
    pub gamma: f64,
}

impl GreenKernel {
    pub fn new(beta: f64, left: f64, right: f64, gamma: f64) -> Result<Self> {
        if !(left < right) {
            return Err(crate::error::invalid(
                "interval",
                alloc::format!("[{left}, {right}] is empty"),
            ));
        }
        if !(beta > 0.0 && gamma > 0.0) {
            return Err(crate::error::invalid(
                "beta",
                "beta and gamma must be positive",
            ));
        }
        Ok(GreenKernel {
            beta,
            left,
            right,
            gamma,
        })
    }

    pub fn h(&self) -> f64 {
        self.right - self.left
    }

    fn check(&self, x: f64) -> Result<()> {
        if x < self.left || x > self.right {
            return Err(Error::OutOfRange {
                x,
                lo: self.left,
                hi: self.right,
            });
        }
        Ok(())
    }

    #[inline]
    fn basis_unchecked(&self, x: f64) -> (f64, f64) {
        let bh = self.beta * self.h();
        let u1 = sinh_ratio(self.beta * (self.right - x), bh);
        let u2 = sinh_ratio(self.beta * (x - self.left), bh);
        (u1, u2)
    }

    #[inline]
    fn green_unchecked(&self, x: f64) -> f64 {
        let a = self.beta * (x - self.left);
        let b = self.beta * (self.right - x);
        -sinh_defect(a, b) / self.gamma
    }
}

/// `u_I(x) = sinh(β(x_{i+1}-x))/sinh(βh)` and `u_II(x) = sinh(β(x-x_i))/sinh(βh)`.
pub fn basis_eval(kernel: &GreenKernel, x: f64) -> Result<(f64, f64)> {
    kernel.check(x)?;
    Ok(kernel.basis_unchecked(x))
}

/// `∫ G_i(x, s) ds` over the interval, i.e. `-(1 - u_I(x) - u_II(x)) / γ`,
/// evaluated without cancellation. Lies in `[-1/γ, 0]` and vanishes at both
/// endpoints.
pub fn green_integral(kernel: &GreenKernel, x: f64) -> Result<f64> {
    kernel.check(x)?;
    Ok(kernel.green_unchecked(x))
}

/// Which global approximation to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Exponential pieces on every interval.
    Plain,
    /// Exponential pieces in the layers, linear interpolation on `[λ, 1-λ]`.
    Repaired,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Plain => "plain",
            Mode::Repaired => "repaired",
        }
    }
}

/// Where the frozen source term `ψ̄_i` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SourceForm {
    /// `ψ((x_i+x_{i+1})/2, (ȳ_i+ȳ_{i+1})/2)`
    #[default]
    Midpoint,
    /// `ψ(x_i, ȳ_i)`
    LeftPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    Exponential,
    Linear,
}

/// Piecewise global solution; immutable once built.
#[derive(Debug, Clone)]
pub struct GlobalSolution {
    mesh: Mesh,
    ybar: Vec<f64>,
    psibar: Vec<f64>,
    kinds: Vec<PieceKind>,
    beta: f64,
    gamma: f64,
    mode: Mode,
}

impl GlobalSolution {
    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn ybar(&self) -> &[f64] {
        &self.ybar
    }

    pub fn psibar(&self) -> &[f64] {
        &self.psibar
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn pieces(&self) -> &[PieceKind] {
        &self.kinds
    }

    fn kernel(&self, i: usize) -> GreenKernel {
        let x = self.mesh.nodes();
        GreenKernel {
            beta: self.beta,
            left: x[i],
            right: x[i + 1],
            gamma: self.gamma,
        }
    }

    /// Value on interval `i` at `x`, which must lie in that interval.
    pub fn eval_on(&self, i: usize, x: f64) -> f64 {
        let y0 = self.ybar[i];
        let y1 = self.ybar[i + 1];
        match self.kinds[i] {
            PieceKind::Exponential => {
                let k = self.kernel(i);
                let (u1, u2) = k.basis_unchecked(x);
                y0 * u1 + y1 * u2 + self.psibar[i] * k.green_unchecked(x)
            }
            PieceKind::Linear => {
                let nodes = self.mesh.nodes();
                let t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
                (1.0 - t) * y0 + t * y1
            }
        }
    }
}

/// Builds `Y` (plain) or `Ỹ` (repaired) from a nodal solution, using the
/// midpoint source term.
pub fn build_global(sol: &DiscreteSolution, p: &Problem, mode: Mode) -> Result<GlobalSolution> {
    build_global_with(sol, p, mode, SourceForm::Midpoint)
}

/// [`build_global`] with a choice of where `ψ̄_i` is evaluated.
pub fn build_global_with(
    sol: &DiscreteSolution,
    p: &Problem,
    mode: Mode,
    source: SourceForm,
) -> Result<GlobalSolution> {
    let mesh = &sol.mesh;
    let n = mesh.n();
    if sol.ybar.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            found: sol.ybar.len(),
        });
    }
    if mode == Mode::Repaired && mesh.is_degenerate() {
        return Err(Error::RepairedOnDegenerateMesh);
    }
    let x = mesh.nodes();
    let y = &sol.ybar;
    let psibar = (0..n)
        .map(|i| match source {
            SourceForm::Midpoint => p.psi(0.5 * (x[i] + x[i + 1]), 0.5 * (y[i] + y[i + 1])),
            SourceForm::LeftPoint => p.psi(x[i], y[i]),
        })
        .collect();
    let interior = mesh.interior_intervals();
    let kinds = (0..n)
        .map(|i| match mode {
            Mode::Repaired if interior.contains(&i) => PieceKind::Linear,
            _ => PieceKind::Exponential,
        })
        .collect();
    Ok(GlobalSolution {
        mesh: mesh.clone(),
        ybar: y.clone(),
        psibar,
        kinds,
        beta: p.beta(),
        gamma: p.gamma(),
        mode,
    })
}

/// Evaluates the global solution at `x ∈ [0, 1]`.
pub fn eval_global(g: &GlobalSolution, x: f64) -> Result<f64> {
    let i = g.mesh.locate(x)?;
    Ok(g.eval_on(i, x))
}
