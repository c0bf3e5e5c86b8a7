//! Sparse multivariate polynomials and rational functions over a
//! [`CoeffRing`](crate::ring::CoeffRing).

mod monomial;
mod parse;
mod ratfunc;
mod sparse;

pub use monomial::{Monomial, MAX_VARS};
pub use parse::parse_ratfunc;
pub use ratfunc::RatFunc;
pub use sparse::{PolyRing, SparsePoly, DEFAULT_TERM_CAP};
