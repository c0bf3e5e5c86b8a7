//! The equation catalog as [`FormalSum`]s, with strong (polynomial) and
//! weak (pointwise) verifiers.

mod catalog;
mod fasteval;
mod formal_sum;
mod verify;

pub use catalog::{build, entry, finite_suite, registry, EntryInfo, Params, J_SPECIALIZATIONS};
pub use formal_sum::{Convention, FormalSum, Term};
pub use verify::{
    admissible_count, admissible_points, is_admissible, lift_to_extension, normalize_mod_inversion, verify_strong,
    verify_weak, verify_weak_with, Mode, Verdict, WeakOptions, DEFAULT_POINT_BUDGET,
};
