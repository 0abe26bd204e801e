//! Edge-length functions of a tetrahedron, the polynomial surrogate of the
//! scoring function `γ`, and a runnable corpus of named inequalities.

mod approx;
mod corpus;
mod functions;
mod lemmas;
mod surrogate;
mod symbolic;

pub use approx::{
    a_range, approximation, approximation_body, approximations, eval_body, validate_approximation, ApproxName,
    Approximation,
};
pub use corpus::{
    builtin_corpus, load_corpus_dir, parse_entry, run_corpus, run_entry, write_corpus_dir, CorpusReport, CorpusResult,
    NamedInequality, Surrogate, SCHEMA,
};
pub use functions::{
    a0_poly, a_poly, build_gamma, delta_det_expr, delta_poly, permute_point, FunctionName, GeometricFunction,
    A_PERMUTATIONS,
};
pub use lemmas::{diameter_entries, dihedral_claims, dihedral_entries, DihedralClaim};
pub use surrogate::{build_p, build_surrogate_g, main_box, p_poly, p_tensor};
pub use symbolic::{Sym, SymKey};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bernstein::BernsteinError;
use crate::expr::ExprError;
use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KeplerError {
    #[error("construction error: {0}")]
    Construction(String),
    #[error("{file}: {message}")]
    Corpus { file: String, message: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Stated outright in the source material.
    PaperStated,
    /// Domains or statements rebuilt here; failures are warnings.
    Reconstructed,
}
