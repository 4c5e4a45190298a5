use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use spbvp_core::global::build_global_with;
use spbvp_core::scheme::interval_coefficients_naive;
use spbvp_core::{
    basis_eval, build_global, builtin_problem, convergence_study, eval_global, generate_mesh,
    green_integral, interval_coefficients, mesh_diagnostics, newton_solve, nodal_error,
    region_errors, sample_points, stability_experiment, GreenKernel, InitialGuess,
    IntervalCoefficients, MeshParams, NewtonOptions, Problem, SourceForm, StudyConfig,
};

use crate::args::{CheckArgs, Common, Format, Sabotage, SolveArgs, TableArgs};
use crate::error::{CliError, Result};
use crate::report;

fn newton_options(c: &Common) -> NewtonOptions {
    NewtonOptions {
        tol: c.newton_tol,
        max_iter: c.newton_max_iter,
        initial_guess: InitialGuess::Constant(c.initial_guess),
    }
}

fn make_problem(c: &Common, epsilon: f64) -> spbvp_core::Result<Problem> {
    let p = builtin_problem(&c.problem, epsilon)?;
    match c.gamma {
        Some(g) => p.with_gamma(g),
        None => Ok(p),
    }
}

fn mesh_params(c: &Common, n: usize, epsilon: f64, m: f64) -> MeshParams {
    MeshParams::new(n, epsilon, m)
        .with_sigma(c.sigma)
        .with_q(c.q)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

pub fn solve(args: &SolveArgs) -> Result<()> {
    let c = &args.common;
    let p = make_problem(c, args.epsilon)?;
    let mesh = generate_mesh(&mesh_params(c, args.n, args.epsilon, p.m()))?;
    let sol = newton_solve(&p, &mesh, &newton_options(c))?;
    let g = build_global_with(&sol, &p, c.mode.into(), SourceForm::Midpoint)?;

    fs::create_dir_all(&args.output).map_err(|e| CliError::io(&args.output, e))?;
    let nodal = args.output.join("nodal.csv");
    report::write_nodal(create(&nodal)?, &mesh, &sol.ybar, &p)?;
    let samples = args.output.join("samples.csv");
    report::write_samples(create(&samples)?, &g, &p, c.samples_per_interval)?;
    let mesh_path = args.output.join("mesh.csv");
    report::write_mesh(create(&mesh_path)?, &mesh)?;

    println!("problem     {}", p.name());
    println!("epsilon     {}", report::num(args.epsilon));
    println!("N           {}", args.n);
    println!(
        "lambda      {}{}",
        report::num(mesh.lambda()),
        if mesh.is_degenerate() {
            " (uniform mesh)"
        } else {
            ""
        }
    );
    println!("mode        {}", g.mode().as_str());
    println!(
        "converged   {} after {} iterations, |F| = {}",
        sol.converged,
        sol.iterations,
        report::num(sol.final_residual)
    );
    if p.has_exact() {
        println!("E_N         {}", report::num(nodal_error(&sol, &p)?));
        let r = region_errors(&g, &p, c.samples_per_interval)?;
        println!("layer_left  {}", report::num(r.layer_left));
        println!("interior    {}", report::num(r.interior));
        println!("layer_right {}", report::num(r.layer_right));
        println!("global_max  {}", report::num(r.global_max));
    }
    println!(
        "wrote       {}, {}, {}",
        nodal.display(),
        samples.display(),
        mesh_path.display()
    );

    if sol.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged(format!(
            "epsilon = {}, N = {}",
            report::num(args.epsilon),
            args.n
        )))
    }
}

pub fn table(args: &TableArgs) -> Result<()> {
    let c = &args.common;
    let mut cfg = StudyConfig::new(args.epsilon.clone(), args.n.clone());
    cfg.mode = c.mode.into();
    cfg.sigma = c.sigma;
    cfg.q = c.q;
    cfg.newton = newton_options(c);
    cfg.samples_per_interval = c.samples_per_interval;
    let rows = convergence_study(|e| make_problem(c, e), &cfg)?;

    let mut buf = Vec::new();
    match args.format {
        Format::Csv => report::write_report_csv(&mut buf, &rows)?,
        Format::Pretty => {
            buf.extend_from_slice(report::pretty_table(&rows, args.n.len()).as_bytes())
        }
    }
    match &args.output {
        Some(path) => {
            let mut f = create(path)?;
            f.write_all(&buf)
                .and_then(|_| f.flush())
                .map_err(|e| CliError::io(path, e))?;
        }
        None => io::stdout()
            .write_all(&buf)
            .map_err(|e| CliError::io("<stdout>", e))?,
    }

    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.converged)
        .map(|r| format!("(epsilon = {}, N = {})", report::num(r.epsilon), r.n))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::NotConverged(failed.join(", ")))
    }
}

type Verdict = std::result::Result<String, String>;
type Suite = fn(&CheckArgs) -> Result<Verdict>;

fn grid(args: &CheckArgs) -> impl Iterator<Item = (usize, f64, usize)> + '_ {
    args.epsilon
        .iter()
        .flat_map(move |&e| args.n.iter().map(move |&n| (e, n)))
        .enumerate()
        .map(|(k, (e, n))| (k, e, n))
}

fn mesh_suite(args: &CheckArgs) -> Result<Verdict> {
    let mut bad = Vec::new();
    let mut count = 0;
    for (_, e, n) in grid(args) {
        let p = make_problem(&args.common, e)?;
        let mesh = generate_mesh(&mesh_params(&args.common, n, e, p.m()))?;
        let d = mesh_diagnostics(&mesh);
        let anchored = mesh.is_degenerate() || mesh.nodes()[n / 4] == mesh.lambda();
        if !(d.within_bounds()
            && d.strictly_increasing
            && d.monotone
            && d.symmetry_defect == 0.0
            && anchored)
        {
            bad.push(format!("(epsilon = {}, N = {n})", report::num(e)));
        }
        count += 1;
    }
    Ok(if bad.is_empty() {
        Ok(format!("{count} meshes"))
    } else {
        Err(format!("violations at {}", bad.join(", ")))
    })
}

/// `βh` values probed by the coefficient suite; the last one only has to stay finite.
const PROBE_BH: [f64; 7] = [1e-6, 1e-3, 1.0, 10.0, 30.0, 300.0, 800.0];

fn coefficient_suite(args: &CheckArgs) -> Result<Verdict> {
    let eval = |bh: f64| -> spbvp_core::Result<IntervalCoefficients> {
        match args.sabotage {
            Some(Sabotage::DeltaDNaive) => Ok(interval_coefficients_naive(1.0, bh)),
            None => interval_coefficients(1.0, bh),
        }
    };
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for bh in PROBE_BH {
        let c = eval(bh)?;
        if bh >= 800.0 {
            let kernel = GreenKernel::new(bh, 0.0, 1.0, 1.0)?;
            let mut finite = [c.a, c.d, c.delta_d, c.a_plus_d()]
                .iter()
                .all(|v| v.is_finite());
            for k in 0..=32 {
                let x = k as f64 / 32.0;
                let (u1, u2) = basis_eval(&kernel, x)?;
                finite &=
                    u1.is_finite() && u2.is_finite() && green_integral(&kernel, x)?.is_finite();
            }
            if !finite {
                failures.push(format!("non-finite values at bh = {bh}"));
            }
            continue;
        }
        let t = (bh / 2.0).tanh();
        let defect = ((c.delta_d - t).abs() / t).max((c.a_plus_d() - 1.0 / t).abs() * t);
        let defect = if defect.is_nan() {
            f64::INFINITY
        } else {
            defect
        };
        worst = worst.max(defect);
        if defect > 1e-13 {
            failures.push(format!("relative defect {defect:.2e} at bh = {bh}"));
        }
    }
    Ok(if failures.is_empty() {
        Ok(format!("worst relative defect {worst:.2e}"))
    } else {
        Err(failures.join("; "))
    })
}

fn stability_suite(args: &CheckArgs) -> Result<Verdict> {
    let mut violations = 0;
    let mut min_ratio = f64::INFINITY;
    let mut pairs = 0;
    for (k, e, n) in grid(args) {
        let p = make_problem(&args.common, e)?;
        let mesh = generate_mesh(&mesh_params(&args.common, n, e, p.m()))?;
        let r = stability_experiment(&p, &mesh, args.trials, args.seed.wrapping_add(k as u64))?;
        violations += r.violations;
        pairs += r.trials - r.skipped;
        min_ratio = min_ratio.min(r.min_ratio);
    }
    let msg = format!("{violations} violations in {pairs} pairs, min ratio {min_ratio:.6}");
    Ok(if violations == 0 { Ok(msg) } else { Err(msg) })
}

fn exactness_suite(args: &CheckArgs) -> Result<Verdict> {
    let mut nodal = 0.0f64;
    let mut global = 0.0f64;
    let mut not_converged = 0;
    for (_, e, n) in grid(args) {
        let p = Problem::linear_gamma(e, 1.0, 0.0, 1.0)?;
        let mesh = generate_mesh(&mesh_params(&args.common, n, e, p.m()))?;
        let sol = newton_solve(&p, &mesh, &newton_options(&args.common))?;
        if !sol.converged {
            not_converged += 1;
        }
        nodal = nodal.max(nodal_error(&sol, &p)?);
        let g = build_global(&sol, &p, spbvp_core::Mode::Plain)?;
        for (_, x) in sample_points(&mesh, args.common.samples_per_interval) {
            global = global.max((eval_global(&g, x)? - p.exact(x).unwrap_or(f64::NAN)).abs());
        }
    }
    let msg = format!("nodal {nodal:.2e}, global {global:.2e}");
    Ok(if nodal <= 1e-12 && global <= 1e-10 && not_converged == 0 {
        Ok(msg)
    } else {
        Err(msg)
    })
}

pub fn check(args: &CheckArgs) -> Result<()> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let suites: [(&str, Suite); 4] = [
        ("mesh", mesh_suite),
        ("coefficients", coefficient_suite),
        ("stability", stability_suite),
        ("exactness", exactness_suite),
    ];
    let mut failed = Vec::new();
    for (name, run) in suites {
        match run(args)? {
            Ok(msg) => println!("suite {name}: PASS ({msg})"),
            Err(msg) => {
                println!("suite {name}: FAIL ({msg})");
                failed.push(name.to_string());
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::PropertyFailure(failed))
    }
}
