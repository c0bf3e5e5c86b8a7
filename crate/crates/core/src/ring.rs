//! Coefficient domains for polynomials: finite fields and the rationals.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::field::{ExactRational, FieldDescriptor, FieldElement};

/// A commutative coefficient field. The descriptor value carries whatever
/// context the elements need (the modulus for `F_q`, nothing for `Q`).
pub trait CoeffRing: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Characteristic; 0 for the rationals.
    fn characteristic(&self) -> u32;

    /// The coefficient Frobenius `a -> a^p`, or `None` in characteristic 0.
    fn frobenius(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// A primitive `k`-th root of unity, if the domain contains one.
    fn primitive_root_of_unity(&self, k: u64) -> Option<Self::Elem>;

    /// Deterministic text for an element. `atomic` is true when the output
    /// can be juxtaposed with `*` without parentheses.
    fn write_elem(&self, a: &Self::Elem) -> (String, bool);

    /// Domain tag used in serialized output, e.g. `GF(7)` or `QQ`.
    fn tag(&self) -> String;

    /// Whether the element is a "negative" that prints with a leading minus.
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    fn cmp_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        a.cmp(b)
    }

    /// A named constant usable in parsed expressions (the extension
    /// generator `g` for `F_{p^e}`).
    fn named_constant(&self, _name: &str) -> Option<Self::Elem> {
        None
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }
}

impl CoeffRing for FieldDescriptor {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldDescriptor::zero(self)
    }
    fn one(&self) -> FieldElement {
        FieldDescriptor::one(self)
    }
    fn from_int(&self, n: i64) -> FieldElement {
        FieldDescriptor::from_int(self, n)
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldDescriptor::add(self, a, b)
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldDescriptor::sub(self, a, b)
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldDescriptor::mul(self, a, b)
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldDescriptor::neg(self, a)
    }
    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        FieldDescriptor::inv(self, a).ok()
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        FieldDescriptor::is_zero(self, a)
    }
    fn characteristic(&self) -> u32 {
        FieldDescriptor::characteristic(self)
    }
    fn frobenius(&self, a: &FieldElement) -> Option<FieldElement> {
        Some(FieldDescriptor::frobenius(self, a))
    }
    fn primitive_root_of_unity(&self, k: u64) -> Option<FieldElement> {
        self.root_of_unity(k)
    }
    fn write_elem(&self, a: &FieldElement) -> (String, bool) {
        let s = self.display(a);
        let atomic = !s.contains('+');
        (s, atomic)
    }
    fn tag(&self) -> String {
        FieldDescriptor::tag(self)
    }
    fn pow(&self, a: &FieldElement, n: u64) -> FieldElement {
        FieldDescriptor::pow(self, a, n)
    }
    fn named_constant(&self, name: &str) -> Option<FieldElement> {
        (name == "g" && self.degree() > 1)
            .then(|| self.from_coords(&[0, 1]).ok())
            .flatten()
    }
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type Elem = ExactRational;

    fn zero(&self) -> ExactRational {
        ExactRational::zero()
    }
    fn one(&self) -> ExactRational {
        ExactRational::one()
    }
    fn from_int(&self, n: i64) -> ExactRational {
        ExactRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a + b
    }
    fn sub(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a - b
    }
    fn mul(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a * b
    }
    fn neg(&self, a: &ExactRational) -> ExactRational {
        -a
    }
    fn inv(&self, a: &ExactRational) -> Option<ExactRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &ExactRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &ExactRational) -> bool {
        a.is_one()
    }
    fn characteristic(&self) -> u32 {
        0
    }
    fn frobenius(&self, _a: &ExactRational) -> Option<ExactRational> {
        None
    }
    fn primitive_root_of_unity(&self, k: u64) -> Option<ExactRational> {
        match k {
            1 => Some(self.one()),
            2 => Some(self.from_int(-1)),
            _ => None,
        }
    }
    fn write_elem(&self, a: &ExactRational) -> (String, bool) {
        if a.is_integer() {
            (a.numer().to_string(), !a.is_negative())
        } else {
            (format!("{}/{}", a.numer(), a.denom()), false)
        }
    }
    fn tag(&self) -> String {
        "QQ".into()
    }
    fn is_negative(&self, a: &ExactRational) -> bool {
        a.is_negative()
    }
}
