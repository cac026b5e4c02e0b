//! Lie subalgebras of `sl(n+1)`, their quotient modules and
//! Chevalley–Eilenberg cohomology in low degree.

pub mod algebra;
pub mod builtin;
pub mod cochain;
pub mod module;

use thiserror::Error;

pub use algebra::{sl_basis, sl_coords, sl_dim, sl_from_coords, structure_constants, vf_bracket, LieAlgebraData, SpanSolver};
pub use builtin::{builtin_algebra, chain_algebra, diagonal_algebra, extension_algebra, parse_algebra_json, sl2_sym};
pub use cochain::{ce_coboundary, coboundary_matrix, cohomology_dim, Cochain, CohomologyReport};
pub use module::{quotient_module, ComplementChoice, QuotientModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("empty basis")]
    Empty,
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("generator {0} has nonzero trace")]
    NonzeroTrace(usize),
    #[error("generators are linearly dependent")]
    Dependent,
    #[error("[{left}, {right}] is not in the span of the basis")]
    NotClosed { left: String, right: String },
    #[error("unknown builtin algebra `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("ad of the grading element is not semisimple over the working field: {0}")]
    NotSemisimple(String),
    #[error("cohomology degree {0} not supported")]
    Degree(usize),
    #[error("malformed algebra spec: {0}")]
    Spec(String),
}
