//! Exact scalars, sparse polynomials, and their reductions mod p.

pub mod field;
pub mod linalg;
pub mod modp;
pub mod poly;
pub mod rational;
pub mod upoly;

pub use field::{ArithError, FieldElem};
pub use linalg::{poly_det, Matrix, SparseMatrix};
pub use modp::{FpPoly, ModError, PrimeContext};
pub use poly::{Exponents, Poly, PolyError};
pub use rational::Q;
pub use upoly::UPoly;
