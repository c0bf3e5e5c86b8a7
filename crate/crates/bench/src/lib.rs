//! Inputs shared by the benchmarks.

use finpolylog_core::eqcat::finite_suite;
use finpolylog_core::{build, FieldDescriptor, FormalSum, Params};

pub fn field(p: u32) -> FieldDescriptor {
    FieldDescriptor::prime(p).expect("odd prime")
}

pub fn equation(p: u32, id: &str) -> FormalSum<FieldDescriptor> {
    build(&field(p), id, &Params::default()).expect("catalog id builds")
}

/// The default finite suite at `p`, built and ready to verify.
pub fn suite(p: u32) -> Vec<FormalSum<FieldDescriptor>> {
    let f = field(p);
    finite_suite(p, p - 1)
        .into_iter()
        .map(|(id, params)| build(&f, &id, &params).expect("suite builds"))
        .collect()
}
