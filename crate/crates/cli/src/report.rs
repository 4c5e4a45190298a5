//! CSV writers and the pretty convergence table.

use std::fmt::Write as _;
use std::io::Write;

use spbvp_core::{ConvergenceRow, GlobalSolution, Mesh, Mode, Problem};

use crate::error::Result;

/// Shortest representation that round-trips.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_nodal<W: Write>(out: W, mesh: &Mesh, ybar: &[f64], p: &Problem) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if p.has_exact() {
        w.write_record(["i", "x_i", "ybar_i", "y_exact_i", "abs_err_i"])?;
    } else {
        w.write_record(["i", "x_i", "ybar_i"])?;
    }
    for (i, (&x, &y)) in mesh.nodes().iter().zip(ybar).enumerate() {
        let mut rec = vec![i.to_string(), num(x), num(y)];
        if let Some(e) = p.exact(x) {
            rec.push(num(e));
            rec.push(num((y - e).abs()));
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `x,Y(x)[,y_exact,abs_err]` preceded by a `#` line naming mode, ε and N.
pub fn write_samples<W: Write>(
    mut out: W,
    g: &GlobalSolution,
    p: &Problem,
    per_interval: usize,
) -> Result<()> {
    writeln!(
        out,
        "# mode={} epsilon={} N={}",
        g.mode().as_str(),
        num(p.epsilon()),
        g.mesh().n()
    )
    .map_err(csv::Error::from)?;
    let mut w = csv::Writer::from_writer(out);
    if p.has_exact() {
        w.write_record(["x", "Y(x)", "y_exact", "abs_err"])?;
    } else {
        w.write_record(["x", "Y(x)"])?;
    }
    for (i, x) in spbvp_core::sample_points(g.mesh(), per_interval) {
        let y = g.eval_on(i, x);
        let mut rec = vec![num(x), num(y)];
        if let Some(e) = p.exact(x) {
            rec.push(num(e));
            rec.push(num((y - e).abs()));
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `index,x,h` with `h_i = x_{i+1} - x_i`; empty on the last node.
pub fn write_mesh<W: Write>(out: W, mesh: &Mesh) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "x", "h"])?;
    for (i, &x) in mesh.nodes().iter().enumerate() {
        let h = mesh.h().get(i).map(|&h| num(h)).unwrap_or_default();
        w.write_record([i.to_string(), num(x), h])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_report_csv<W: Write>(out: W, rows: &[ConvergenceRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "epsilon",
        "N",
        "E_N",
        "Ord",
        "layer_left",
        "interior",
        "layer_right",
        "global_max",
        "mode",
        "converged",
        "iterations",
    ])?;
    for r in rows {
        let g = r.regions;
        w.write_record([
            num(r.epsilon),
            r.n.to_string(),
            num(r.e_n),
            opt(r.ord),
            opt(g.map(|g| g.layer_left)),
            opt(g.map(|g| g.interior)),
            opt(g.map(|g| g.layer_right)),
            opt(g.map(|g| g.global_max)),
            r.mode.as_str().to_string(),
            r.converged.to_string(),
            r.iterations.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `4.9836e-03`, the four-digit style of published tables.
fn sci4(v: f64) -> String {
    if !v.is_finite() || v == 0.0 {
        return format!("{v:.4e}");
    }
    let s = format!("{v:.4e}");
    let (mant, exp) = s.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

fn ord2(v: Option<f64>) -> String {
    v.map(|o| format!("{o:.2}"))
        .unwrap_or_else(|| "-".to_string())
}

fn eps_label(e: f64) -> String {
    let k = e.log2();
    if (k - k.round()).abs() < 1e-12 {
        format!("eps = 2^{}", k.round() as i64)
    } else {
        format!("eps = {}", num(e))
    }
}

/// N rows, one column group per ε (three groups per block), `E_N` and `Ord`
/// in each group; repaired mode adds the dense global error and its order.
pub fn pretty_table(rows: &[ConvergenceRow], n_per_eps: usize) -> String {
    let columns: Vec<&[ConvergenceRow]> = rows.chunks(n_per_eps).collect();
    let repaired = rows.iter().any(|r| r.mode == Mode::Repaired);
    // characters between two column bars
    let inner = if repaired { 39 } else { 20 };
    let mut s = String::new();
    for block in columns.chunks(3) {
        let _ = write!(s, "{:>6} |", "N");
        for _ in block {
            if repaired {
                let _ = write!(
                    s,
                    " {:>11} {:>6} {:>11} {:>6} |",
                    "E_N", "Ord", "global_max", "Ord"
                );
            } else {
                let _ = write!(s, " {:>11} {:>6} |", "E_N", "Ord");
            }
        }
        s.push('\n');
        let rule = "-".repeat(8 + block.len() * (inner + 1));
        let _ = writeln!(s, "{rule}");
        for r in 0..n_per_eps {
            let n = block[0][r].n;
            let label = if n.is_power_of_two() {
                format!("2^{}", n.trailing_zeros())
            } else {
                n.to_string()
            };
            let _ = write!(s, "{label:>6} |");
            for col in block {
                let row = &col[r];
                let e = if row.converged {
                    sci4(row.e_n)
                } else {
                    "no conv.".into()
                };
                if repaired {
                    let g = row
                        .regions
                        .map(|g| sci4(g.global_max))
                        .unwrap_or_else(|| "-".into());
                    let _ = write!(
                        s,
                        " {e:>11} {:>6} {g:>11} {:>6} |",
                        ord2(row.ord),
                        ord2(row.global_ord)
                    );
                } else {
                    let _ = write!(s, " {e:>11} {:>6} |", ord2(row.ord));
                }
            }
            s.push('\n');
        }
        let _ = writeln!(s, "{rule}");
        let _ = write!(s, "{:>6} |", "");
        for col in block {
            let _ = write!(s, " {:^w$} |", eps_label(col[0].epsilon), w = inner - 2);
        }
        s.push('\n');
        s.push('\n');
    }
    s
}
