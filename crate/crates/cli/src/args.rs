use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spbvp_core::Mode;

#[derive(Debug, Parser)]
#[command(
    name = "spbvp",
    version,
    about = "Fitted-scheme solver for ε²y″ = f(x, y), y(0) = y(1) = 0"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one (ε, N) case and write nodal, sample and mesh CSV files.
    Solve(SolveArgs),
    /// Convergence table over lists of ε and doubling N.
    Table(TableArgs),
    /// Run the property suites and print one verdict per suite.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Plain,
    Repaired,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Plain => Mode::Plain,
            ModeArg::Repaired => Mode::Repaired,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sabotage {
    /// Evaluate the interval coefficients with raw cosh/sinh and `d - a`.
    DeltaDNaive,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, default_value = "paper-test")]
    pub problem: String,
    /// Transition-point parameter q of the mesh.
    #[arg(long, default_value_t = 0.25)]
    pub q: f64,
    /// Transition-point parameter σ of the mesh.
    #[arg(long, default_value_t = 2.0)]
    pub sigma: f64,
    /// Replace the problem's γ (must be ≥ m).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub newton_tol: f64,
    #[arg(long, default_value_t = 50)]
    pub newton_max_iter: usize,
    /// Constant initial Newton guess for the interior nodes.
    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    pub initial_guess: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 32)]
    pub samples_per_interval: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    /// ε, as a decimal or a power such as `2^-10`.
    #[arg(long, value_parser = parse_epsilon, allow_negative_numbers = true)]
    pub epsilon: f64,
    #[arg(long)]
    pub n: usize,
    /// Output directory for nodal.csv, samples.csv and mesh.csv.
    #[arg(long, env = "SPBVP_OUT_DIR", default_value = "spbvp-out")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated ε list.
    #[arg(
        long,
        value_parser = parse_epsilon,
        value_delimiter = ',',
        num_args = 1..,
        default_value = "2^-4,2^-6,2^-10,2^-12,2^-20,2^-30"
    )]
    pub epsilon: Vec<f64>,
    /// Comma-separated, doubling N list.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "32,64,128,256,512,1024,2048")]
    pub n: Vec<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(
        long,
        value_parser = parse_epsilon,
        value_delimiter = ',',
        num_args = 1..,
        default_value = "2^-4,2^-6,2^-10,2^-12,2^-20,2^-30"
    )]
    pub epsilon: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "32,256")]
    pub n: Vec<usize>,
    /// Random pairs per (ε, N) in the stability suite.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Fault injection for testing the suites themselves.
    #[arg(long, value_enum)]
    pub sabotage: Option<Sabotage>,
}

/// Parses `0.001`, `1e-3`, `2^-10` or `2^(-10)`.
pub fn parse_epsilon(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('^') {
        Some((base, exp)) => {
            let exp = exp.trim().trim_start_matches('(').trim_end_matches(')');
            let base: f64 = base
                .trim()
                .parse()
                .map_err(|_| format!("bad base in `{s}`"))?;
            let exp: f64 = exp
                .trim()
                .parse()
                .map_err(|_| format!("bad exponent in `{s}`"))?;
            base.powf(exp)
        }
        None => s.parse().map_err(|_| format!("`{s}` is not a number"))?,
    };
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(format!("epsilon {value} must lie in (0, 1)"))
    }
}
