use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the solver core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// ε must lie in the open interval (0, 1).
    EpsilonOutOfRange(f64),
    /// A scalar problem or mesh parameter violates its constraint.
    InvalidParameter {
        name: &'static str,
        reason: String,
    },
    UnknownProblem(String),
    /// The problem carries no exact solution.
    MissingExact,
    /// An abscissa lies outside the admissible range.
    OutOfRange {
        x: f64,
        lo: f64,
        hi: f64,
    },
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    /// Zero (or non-finite) pivot in the tridiagonal elimination.
    SingularPivot {
        row: usize,
    },
    /// The generating function was asked for the degenerate branch λ ≥ q.
    DegenerateTransition {
        lambda: f64,
        q: f64,
    },
    /// Repaired global solutions need a layer/interior split (λ < q).
    RepairedOnDegenerateMesh,
    /// Convergence tables need N lists that double at every step.
    NotDoubling {
        previous: usize,
        next: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EpsilonOutOfRange(eps) => write!(f, "epsilon {eps} is not in (0, 1)"),
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::UnknownProblem(id) => write!(f, "unknown problem id `{id}`"),
            Error::MissingExact => f.write_str("problem has no exact solution"),
            Error::OutOfRange { x, lo, hi } => write!(f, "x = {x} is outside [{lo}, {hi}]"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected a vector of length {expected}, found {found}")
            }
            Error::SingularPivot { row } => write!(f, "singular pivot in row {row}"),
            Error::DegenerateTransition { lambda, q } => write!(
                f,
                "transition point {lambda} is not below q = {q}; use the uniform mesh"
            ),
            Error::RepairedOnDegenerateMesh => {
                f.write_str("repaired solution requires a non-degenerate mesh (lambda < q)")
            }
            Error::NotDoubling { previous, next } => {
                write!(f, "N list must double at each step ({previous} -> {next})")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
