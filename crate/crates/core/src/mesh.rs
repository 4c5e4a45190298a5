//! Layer-adapted Shishkin-type mesh with a C¹ generating function.
//!
//! The mesh is `x_i = φ(i/N)` with
//!
//! ```text
//!          ⎧ (λ/q) t                      t ∈ [0, q]
//! φ(t) =   ⎨ p (t - q)³ + (λ/q) t         t ∈ [q, 1/2]
//!          ⎩ 1 - φ(1 - t)                 t ∈ [1/2, 1]
//! ```
//!
//! and `p = ½ (1 - λ/q) (½ - q)⁻³`, so that `φ(1/2) = 1/2`. The transition
//! point is `λ = min{σ ε ln N / √m, q}`. When `λ = q` the layers are not thin
//! compared to the mesh and a uniform mesh is used instead.

use alloc::format;
use alloc::vec::Vec;

use libm::{log, sqrt};

use crate::error::{invalid, Error, Result};

/// Parameters of the layer-adapted mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshParams {
    /// Number of intervals; divisible by 4.
    pub n: usize,
    pub epsilon: f64,
    /// Lower bound of `f_y`.
    pub m: f64,
    pub sigma: f64,
    /// Fraction of the intervals spent in each layer.
    pub q: f64,
}

impl MeshParams {
    /// `σ = 2`, `q = 1/4`.
    pub fn new(n: usize, epsilon: f64, m: f64) -> Self {
        MeshParams {
            n,
            epsilon,
            m,
            sigma: 2.0,
            q: 0.25,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || !self.n.is_multiple_of(4) {
            return Err(invalid(
                "n",
                format!("{} must be a positive multiple of 4", self.n),
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::EpsilonOutOfRange(self.epsilon));
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(invalid("m", format!("{} must be positive", self.m)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(invalid("sigma", format!("{} must be positive", self.sigma)));
        }
        if !(self.q > 0.0 && self.q < 0.5) {
            return Err(invalid("q", format!("{} must lie in (0, 1/2)", self.q)));
        }
        let qn = self.q * self.n as f64;
        if qn != libm::trunc(qn) {
            return Err(invalid("q", format!("q*N = {qn} must be an integer")));
        }
        Ok(())
    }

    /// `q N`, the index of the transition point.
    pub fn layer_intervals(&self) -> usize {
        (self.q * self.n as f64) as usize
    }
}

/// `λ = min{σ ε ln N / √m, q}`; the flag is set when the minimum is `q`.
pub fn transition_point(params: &MeshParams) -> (f64, bool) {
    let candidate = params.sigma * params.epsilon * log(params.n as f64) / sqrt(params.m);
    if candidate >= params.q {
        (params.q, true)
    } else {
        (candidate, false)
    }
}

/// Generating function `φ(t)` for `0 < λ < q < 1/2`.
pub fn generating_function(t: f64, lambda: f64, q: f64) -> Result<f64> {
    if !(lambda < q) {
        return Err(Error::DegenerateTransition { lambda, q });
    }
    if !(lambda > 0.0 && q < 0.5) {
        return Err(invalid(
            "lambda",
            format!("need 0 < lambda < q < 1/2, got lambda = {lambda}, q = {q}"),
        ));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            x: t,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(phi(t, lambda, q))
}

fn phi(t: f64, lambda: f64, q: f64) -> f64 {
    if t > 0.5 {
        return 1.0 - phi(1.0 - t, lambda, q);
    }
    let slope = lambda / q;
    if t <= q {
        slope * t
    } else {
        let half = 0.5 - q;
        let p = 0.5 * (1.0 - slope) / (half * half * half);
        let s = t - q;
        p * s * s * s + slope * t
    }
}

/// Mesh `0 = x_0 < x_1 < … < x_N = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    h: Vec<f64>,
    lambda: f64,
    degenerate: bool,
    params: MeshParams,
}

/// Builds the mesh. The left half comes from `φ`, the right half is the exact
/// mirror `x_{N-i} = 1 - x_i`, and `x_{N/2} = 1/2`.
pub fn generate_mesh(params: &MeshParams) -> Result<Mesh> {
    params.validate()?;
    let n = params.n;
    let (lambda, degenerate) = transition_point(params);
    let mut nodes = alloc::vec![0.0; n + 1];
    if degenerate {
        for (i, x) in nodes.iter_mut().enumerate() {
            *x = i as f64 / n as f64;
        }
    } else {
        let half = n / 2;
        for i in 0..half {
            nodes[i] = phi(i as f64 / n as f64, lambda, params.q);
            nodes[n - i] = 1.0 - nodes[i];
        }
        nodes[half] = 0.5;
    }
    nodes[0] = 0.0;
    nodes[n] = 1.0;
    let h = nodes.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(Mesh {
        nodes,
        h,
        lambda,
        degenerate,
        params: *params,
    })
}

impl Mesh {
    /// Wraps arbitrary nodes `0 = x_0 < … < x_N = 1` (`N` divisible by 4).
    ///
    /// The result carries no layer information: it is flagged degenerate with
    /// `λ = 1/4`, `ε = 1/2` and `m = 1` recorded as placeholders in its params.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Mesh> {
        let n = nodes.len().saturating_sub(1);
        if n == 0 || !n.is_multiple_of(4) {
            return Err(invalid(
                "nodes",
                format!("{n} intervals; need a positive multiple of 4"),
            ));
        }
        if nodes[0] != 0.0 || nodes[n] != 1.0 {
            return Err(invalid("nodes", "mesh must start at 0 and end at 1"));
        }
        if !nodes.windows(2).all(|w| w[1] > w[0]) {
            return Err(invalid("nodes", "nodes must be strictly increasing"));
        }
        let h = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Mesh {
            nodes,
            h,
            lambda: 0.25,
            degenerate: true,
            params: MeshParams::new(n, 0.5, 1.0),
        })
    }

    /// Number of intervals `N`.
    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Interval lengths `h_i = x_{i+1} - x_i`, `i = 0..N-1`.
    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn params(&self) -> &MeshParams {
        &self.params
    }

    /// Index range `[N/4, 3N/4)` (for `q = 1/4`) of the intervals covering `[λ, 1-λ]`.
    pub fn interior_intervals(&self) -> core::ops::Range<usize> {
        let k = self.params.layer_intervals();
        k..self.n() - k
    }

    /// Interval containing `x ∈ [0, 1]`; nodes belong to the interval on their
    /// left, except `x = 0`.
    pub fn locate(&self, x: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfRange {
                x,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let first_ge = self.nodes.partition_point(|&node| node < x);
        Ok(first_ge.saturating_sub(1).min(self.n() - 1))
    }
}

/// Structural measurements of a mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshDiagnostics {
    pub max_h: f64,
    pub max_h_jump: f64,
    /// `h` non-decreasing on `[0, 1/2]` and non-increasing on `[1/2, 1]`.
    pub monotone: bool,
    pub strictly_increasing: bool,
    pub symmetry_defect: f64,
    /// `‖φ′‖∞ / N`; equals `6/N` for `q = 1/4`.
    pub h_bound: f64,
    /// `‖φ″‖∞ / N²`; equals `48/N²` for `q = 1/4`.
    pub h_jump_bound: f64,
}

impl MeshDiagnostics {
    /// Both bounds hold up to rounding in the node coordinates.
    pub fn within_bounds(&self) -> bool {
        self.max_h <= self.h_bound + H_TOL && self.max_h_jump <= self.h_jump_bound + H_TOL
    }
}

/// Slack for comparing neighbouring interval lengths that are equal in exact
/// arithmetic.
const H_TOL: f64 = 8.0 * f64::EPSILON;

pub fn mesh_diagnostics(mesh: &Mesh) -> MeshDiagnostics {
    let n = mesh.n();
    let h = &mesh.h;
    let x = &mesh.nodes;
    let max_h = h.iter().copied().fold(0.0, f64::max);
    let max_h_jump = h
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    let half = n / 2;
    let monotone = (0..n - 1).all(|i| {
        if i + 1 < half {
            h[i + 1] >= h[i] - H_TOL
        } else if i >= half {
            h[i + 1] <= h[i] + H_TOL
        } else {
            true
        }
    });
    let strictly_increasing = x.windows(2).all(|w| w[1] > w[0]);
    let symmetry_defect = (0..=n)
        .map(|i| (x[i] + x[n - i] - 1.0).abs())
        .fold(0.0, f64::max);

    let nf = n as f64;
    let (dphi, d2phi) = if mesh.degenerate {
        (1.0, 0.0)
    } else {
        let q = mesh.params.q;
        let half_width = 0.5 - q;
        (
            f64::max(1.5 / half_width, 1.0),
            3.0 / (half_width * half_width),
        )
    };
    MeshDiagnostics {
        max_h,
        max_h_jump,
        monotone,
        strictly_increasing,
        symmetry_defect,
        h_bound: dphi / nf,
        h_jump_bound: d2phi / (nf * nf),
    }
}
