//! Refutation of interval linear systems by Farkas certificates. Multipliers
//! come from an untrusted floating-point solver; only exact rational
//! arithmetic decides the verdict.

mod bridge;
mod parse;
mod system;

pub use bridge::{
    certificate_from_floats, emit_lp, parse_solution, parse_solution_named, rationalize, refute, solve_builtin,
    solve_external, SolverChoice, CLAMP, MAX_DENOMINATOR,
};
pub use parse::{Coef, Constraint, ConstraintFile, Op};
pub use system::{check_certificate, CertificateVerdict, FarkasCertificate, IntervalLinearSystem};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("variable `{0}` has no bound")]
    MissingBounds(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error("multiplier {0} is negative")]
    NegativeMultiplier(usize),
    #[error("solver bridge: {0}")]
    Bridge(String),
}
