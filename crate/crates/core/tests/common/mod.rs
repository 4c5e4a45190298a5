//! Independent reference computations shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop, clippy::too_many_arguments)]

use spbvp_core::{residual, Mesh, Problem, TridiagonalSystem};

/// Dense Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

pub fn to_dense(sys: &TridiagonalSystem) -> Vec<Vec<f64>> {
    let n = sys.len();
    let mut a = vec![vec![0.0; n]; n];
    for k in 0..n {
        a[k][k] = sys.diag[k];
        if k > 0 {
            a[k][k - 1] = sys.sub[k];
        }
        if k + 1 < n {
            a[k][k + 1] = sys.sup[k];
        }
    }
    a
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫ G(x, s) ds` over `[0, h]` straight from the piecewise Green's function
/// with `w(s) = -β / sinh(βh)` and `ε² = γ / β²`.
pub fn green_quadrature(beta: f64, h: f64, gamma: f64, x: f64) -> f64 {
    let sh = (beta * h).sinh();
    let u1 = |t: f64| (beta * (h - t)).sinh() / sh;
    let u2 = |t: f64| (beta * t).sinh() / sh;
    let eps2 = gamma / (beta * beta);
    let w = -beta / sh;
    let g = |s: f64| {
        if x <= s {
            u2(x) * u1(s) / (eps2 * w)
        } else {
            u1(x) * u2(s) / (eps2 * w)
        }
    };
    let scale = 1.0 / gamma;
    simpson(&g, 0.0, x, 1e-15 * scale) + simpson(&g, x, h, 1e-15 * scale)
}

/// Central-difference Jacobian of the interior rows with respect to the
/// interior unknowns.
pub fn fd_jacobian(p: &Problem, mesh: &Mesh, y: &[f64], step: f64) -> Vec<Vec<f64>> {
    let n = mesh.n();
    let mut jac = vec![vec![0.0; n - 1]; n - 1];
    for col in 1..n {
        let mut plus = y.to_vec();
        let mut minus = y.to_vec();
        plus[col] += step;
        minus[col] -= step;
        let fp = residual(p, mesh, &plus).unwrap();
        let fm = residual(p, mesh, &minus).unwrap();
        for row in 1..n {
            jac[row - 1][col - 1] = (fp[row] - fm[row]) / (2.0 * step);
        }
    }
    jac
}

/// Exact `ε²y″ = γy` solution with `y(0) = a`, `y(1) = b`, via `sinh` ratios
/// evaluated in exponential form.
pub fn linear_exact(beta: f64, a: f64, b: f64, x: f64) -> f64 {
    let ratio = |u: f64| {
        if u >= beta {
            1.0
        } else {
            (-(beta - u)).exp() * (-2.0 * u).exp_m1() / (-2.0 * beta).exp_m1()
        }
    };
    a * ratio(beta * (1.0 - x)) + b * ratio(beta * x)
}

pub fn eps(k: i32) -> f64 {
    (2.0f64).powi(-k)
}

/// Nonlinear test problem: `f = y + 0.5 sin y - (1 - 2x)²`, `0.5 ≤ f_y ≤ 1.5`.
pub fn sine_problem(epsilon: f64) -> Problem {
    Problem::new(
        "sine",
        epsilon,
        0.5,
        1.5,
        |x, y| {
            let s = 1.0 - 2.0 * x;
            y + 0.5 * y.sin() - s * s
        },
        |_, y| 1.0 + 0.5 * y.cos(),
    )
    .unwrap()
}
