//! Finite polylogarithms over fields of odd characteristic.
//!
//! The crate builds the polynomials `L_n(T) = sum_{k=1}^{p-1} T^k / k^n`,
//! a catalog of their functional equations, exact verifiers, kernel
//! computations characterizing `L_1` and `L_2`, the transport of classical
//! polylogarithm equations through a derivation, symbolic checks of a clean
//! p-adic polylogarithm family, and the 2-cocycle / entropy material built
//! from `L_1`.

pub mod cocycle;
pub mod derivmap;
pub mod eqcat;
pub mod error;
pub mod field;
pub mod finlog;
pub mod linalg;
pub mod padic;
pub mod poly;
pub mod ring;
pub mod solver;

pub use derivmap::{derive, derived_equals, Derivation};
pub use eqcat::{build, Convention, FormalSum, Params, Term, Verdict};
pub use error::{Error, Result};
pub use field::{ExactRational, FieldDescriptor, FieldElement};
pub use finlog::{finite_polylog, FinitePolylog};
pub use poly::{parse_ratfunc, Monomial, PolyRing, RatFunc, SparsePoly};
pub use ring::{CoeffRing, Rationals};
pub use solver::{characterize, KernelReport, Preset};
