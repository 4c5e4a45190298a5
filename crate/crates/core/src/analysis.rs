//! Error measurement and convergence studies.

use alloc::vec::Vec;

use libm::log;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::global::{build_global_with, GlobalSolution, Mode, SourceForm};
use crate::mesh::{generate_mesh, Mesh, MeshParams};
use crate::problem::Problem;
use crate::scheme::{max_norm, newton_solve, residual, DiscreteSolution, NewtonOptions};

/// Dense samples per interval used by default in error studies.
pub const DEFAULT_SAMPLES_PER_INTERVAL: usize = 32;

/// `max_i |y(x_i) - ȳ_i|`.
pub fn nodal_error(sol: &DiscreteSolution, p: &Problem) -> Result<f64> {
    if !p.has_exact() {
        return Err(Error::MissingExact);
    }
    let err = sol
        .mesh
        .nodes()
        .iter()
        .zip(&sol.ybar)
        .map(|(&x, &y)| (p.exact(x).unwrap_or(f64::NAN) - y).abs());
    Ok(err.fold(0.0, f64::max))
}

/// `Ord = (ln E_N - ln E_2N) / ln(2k/(k+1))` with `N = 2^k`.
///
/// `k` must exceed 1 (the denominator vanishes at `k = 1`).
pub fn convergence_order(e_n: f64, e_2n: f64, k: f64) -> Result<f64> {
    if !(e_n > 0.0 && e_2n > 0.0) {
        return Err(invalid(
            "error",
            alloc::format!("errors must be positive, got {e_n} and {e_2n}"),
        ));
    }
    if !(k > 1.0) {
        return Err(invalid("k", alloc::format!("log2 N = {k} must exceed 1")));
    }
    Ok((log(e_n) - log(e_2n)) / log(2.0 * k / (k + 1.0)))
}

/// `ln(E_N / E_2N) / ln 2`.
pub fn classical_order(e_n: f64, e_2n: f64) -> Result<f64> {
    if !(e_n > 0.0 && e_2n > 0.0) {
        return Err(invalid(
            "error",
            alloc::format!("errors must be positive, got {e_n} and {e_2n}"),
        ));
    }
    Ok(log(e_n / e_2n) / core::f64::consts::LN_2)
}

/// Sample abscissae: every interval contributes both endpoints and
/// `per_interval` equispaced interior points. Yields `(interval, x)`.
pub fn sample_points(mesh: &Mesh, per_interval: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
    let x = mesh.nodes();
    let steps = per_interval + 1;
    (0..mesh.n()).flat_map(move |i| {
        let (a, b) = (x[i], x[i + 1]);
        (0..=steps).map(move |j| {
            let xj = if j == steps {
                b
            } else {
                a + (b - a) * (j as f64) / (steps as f64)
            };
            (i, xj)
        })
    })
}

/// Max-abs errors over `[0, λ]`, `[λ, 1-λ]`, `[1-λ, 1]` and `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionErrors {
    pub layer_left: f64,
    pub interior: f64,
    pub layer_right: f64,
    pub global_max: f64,
    /// Uniform mesh: no layer regions, everything is reported as interior.
    pub degenerate: bool,
}

/// Dense-sampled error of a global solution, split by region.
pub fn region_errors(
    g: &GlobalSolution,
    p: &Problem,
    samples_per_interval: usize,
) -> Result<RegionErrors> {
    if !p.has_exact() {
        return Err(Error::MissingExact);
    }
    let mesh = g.mesh();
    let degenerate = mesh.is_degenerate();
    let interior = mesh.interior_intervals();
    let mut out = RegionErrors {
        layer_left: 0.0,
        interior: 0.0,
        layer_right: 0.0,
        global_max: 0.0,
        degenerate,
    };
    for (i, x) in sample_points(mesh, samples_per_interval) {
        let e = (p.exact(x).unwrap_or(f64::NAN) - g.eval_on(i, x)).abs();
        let slot = if degenerate || interior.contains(&i) {
            &mut out.interior
        } else if i < interior.start {
            &mut out.layer_left
        } else {
            &mut out.layer_right
        };
        *slot = slot.max(e);
    }
    out.global_max = out.layer_left.max(out.interior).max(out.layer_right);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub trials: usize,
    /// Pairs with `w = v`.
    pub skipped: usize,
    pub violations: usize,
    /// Smallest observed `‖Fw - Fv‖∞ / (m ‖w - v‖∞)`.
    pub min_ratio: f64,
}

/// Relative slack for rounding in the residual evaluation.
const STABILITY_SLACK: f64 = 1e-12;

/// `‖Fw - Fv‖∞ / (m ‖w - v‖∞)`, or `None` when `w = v`.
pub fn stability_ratio(p: &Problem, mesh: &Mesh, w: &[f64], v: &[f64]) -> Result<Option<f64>> {
    let fw = residual(p, mesh, w)?;
    let fv = residual(p, mesh, v)?;
    let diff: Vec<f64> = w.iter().zip(v).map(|(a, b)| a - b).collect();
    let dnorm = max_norm(&diff);
    if dnorm == 0.0 {
        return Ok(None);
    }
    let fdiff: Vec<f64> = fw.iter().zip(&fv).map(|(a, b)| a - b).collect();
    Ok(Some(max_norm(&fdiff) / (p.m() * dnorm)))
}

/// Draws `trials` random pairs `w, v` (interior entries uniform in `[-2, 2]`,
/// zero boundary entries) and checks `m ‖w - v‖∞ ≤ ‖Fw - Fv‖∞`.
pub fn stability_experiment(
    p: &Problem,
    mesh: &Mesh,
    trials: usize,
    seed: u64,
) -> Result<StabilityReport> {
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    let n = mesh.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let mut u = alloc::vec![0.0; n + 1];
        for ui in &mut u[1..n] {
            *ui = rng.gen_range(-2.0..=2.0);
        }
        u
    };
    let mut report = StabilityReport {
        trials,
        skipped: 0,
        violations: 0,
        min_ratio: f64::INFINITY,
    };
    for _ in 0..trials {
        let w = draw(&mut rng);
        let v = draw(&mut rng);
        match stability_ratio(p, mesh, &w, &v)? {
            None => report.skipped += 1,
            Some(r) => {
                if !(r >= 1.0 - STABILITY_SLACK) {
                    report.violations += 1;
                }
                report.min_ratio = report.min_ratio.min(r);
            }
        }
    }
    Ok(report)
}

/// Inputs of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub epsilons: Vec<f64>,
    /// Strictly doubling list of interval counts.
    pub ns: Vec<usize>,
    pub mode: Mode,
    pub sigma: f64,
    pub q: f64,
    pub newton: NewtonOptions,
    pub samples_per_interval: usize,
    pub source: SourceForm,
}

impl StudyConfig {
    pub fn new(epsilons: Vec<f64>, ns: Vec<usize>) -> Self {
        StudyConfig {
            epsilons,
            ns,
            mode: Mode::Plain,
            sigma: 2.0,
            q: 0.25,
            newton: NewtonOptions::default(),
            samples_per_interval: DEFAULT_SAMPLES_PER_INTERVAL,
            source: SourceForm::Midpoint,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() || self.ns.is_empty() {
            return Err(invalid("study", "epsilon and N lists must be non-empty"));
        }
        for w in self.ns.windows(2) {
            if w[1] != 2 * w[0] {
                return Err(Error::NotDoubling {
                    previous: w[0],
                    next: w[1],
                });
            }
        }
        Ok(())
    }
}

/// One `(ε, N)` cell of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    pub n: usize,
    /// Nodal max error `E_N`.
    pub e_n: f64,
    /// `Ord` from `E_N` and `E_2N`; absent for the last N or after a failed solve.
    pub ord: Option<f64>,
    /// Dense-sampled errors of the global solution; absent when the requested
    /// mode cannot be built on this mesh.
    pub regions: Option<RegionErrors>,
    /// `Ord` formula applied to `global_max`.
    pub global_ord: Option<f64>,
    /// Classical order `ln(E_N/E_2N)/ln 2` of the interior-region error.
    pub interior_order: Option<f64>,
    pub mode: Mode,
    pub converged: bool,
    pub iterations: usize,
    pub lambda: f64,
    pub degenerate: bool,
}

/// Runs mesh → Newton → global solution → errors for every `(ε, N)` and fills
/// in the orders down each ε column. Rows come out ordered by the ε list, then
/// by N.
pub fn convergence_study<F>(factory: F, cfg: &StudyConfig) -> Result<Vec<ConvergenceRow>>
where
    F: Fn(f64) -> Result<Problem>,
{
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.epsilons.len() * cfg.ns.len());
    for &eps in &cfg.epsilons {
        let p = factory(eps)?;
        let start = rows.len();
        for &n in &cfg.ns {
            rows.push(study_cell(&p, n, cfg)?);
        }
        fill_orders(&mut rows[start..]);
    }
    Ok(rows)
}

fn study_cell(p: &Problem, n: usize, cfg: &StudyConfig) -> Result<ConvergenceRow> {
    let params = MeshParams::new(n, p.epsilon(), p.m())
        .with_sigma(cfg.sigma)
        .with_q(cfg.q);
    let mesh = generate_mesh(&params)?;
    let sol = newton_solve(p, &mesh, &cfg.newton)?;
    let e_n = nodal_error(&sol, p)?;
    let regions = match build_global_with(&sol, p, cfg.mode, cfg.source) {
        Ok(g) => Some(region_errors(&g, p, cfg.samples_per_interval)?),
        Err(Error::RepairedOnDegenerateMesh) => None,
        Err(e) => return Err(e),
    };
    Ok(ConvergenceRow {
        epsilon: p.epsilon(),
        n,
        e_n,
        ord: None,
        regions,
        global_ord: None,
        interior_order: None,
        mode: cfg.mode,
        converged: sol.converged,
        iterations: sol.iterations,
        lambda: mesh.lambda(),
        degenerate: mesh.is_degenerate(),
    })
}

fn fill_orders(column: &mut [ConvergenceRow]) {
    for j in 0..column.len().saturating_sub(1) {
        let (cur, next) = (&column[j], &column[j + 1]);
        if !(cur.converged && next.converged) {
            continue;
        }
        let k = libm::log2(cur.n as f64);
        let ord = convergence_order(cur.e_n, next.e_n, k).ok();
        let (global_ord, interior_order) = match (cur.regions, next.regions) {
            (Some(a), Some(b)) => (
                convergence_order(a.global_max, b.global_max, k).ok(),
                classical_order(a.interior, b.interior).ok(),
            ),
            _ => (None, None),
        };
        let row = &mut column[j];
        row.ord = ord;
        row.global_ord = global_ord;
        row.interior_order = interior_order;
    }
}
