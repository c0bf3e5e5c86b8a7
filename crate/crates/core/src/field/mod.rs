//! Exact arithmetic foundations: prime fields, small extension fields,
//! arbitrary-precision rationals, Bernoulli and Genocchi numbers.

mod bernoulli;
mod finite;

pub use bernoulli::{bernoulli_mod_p, exact_bernoulli, genocchi, reduce_integer, reduce_rational};
pub use finite::{
    build_extension, build_extension_bounded, is_prime, FieldDescriptor, FieldElement, DEFAULT_MAX_ORDER,
    MAX_EXT_DEGREE,
};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type ExactRational = num_rational::BigRational;
