use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_EXT_DEGREE: usize = 4;

/// Default bound on the field order `q = p^e`.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 24;

/// An element of `F_q`, stored as coordinates in the power basis
/// `1, g, ..., g^{e-1}` of its field. Coordinates beyond the extension
/// degree are always zero.
///
/// The element carries no pointer to its field: every operation goes through
/// the [`FieldDescriptor`] that created it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    c: [u32; MAX_EXT_DEGREE],
}

impl FieldElement {
    /// Coordinates in the modulus basis (trailing zero coordinates included).
    pub fn coords(&self) -> &[u32; MAX_EXT_DEGREE] {
        &self.c
    }

    /// The residue of a prime-field element.
    pub fn residue(&self) -> u32 {
        self.c[0]
    }
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    p: u32,
    degree: usize,
    /// Monic modulus, coefficients from the constant term upwards.
    modulus: Vec<u32>,
    order: u64,
}

/// A finite field `F_{p^e}` with `p` odd, described by a monic irreducible
/// modulus of degree `e`. Cheap to clone and shareable across threads.
#[derive(Clone, Debug)]
pub struct FieldDescriptor(Arc<Inner>);

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FieldDescriptor {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_odd_prime(p: u32) -> Result<()> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::NotOddPrime(p as u64));
    }
    Ok(())
}

/// Build `F_{p^e}` using the lexicographically smallest monic irreducible
/// modulus, with the default order bound.
pub fn build_extension(p: u32, degree: usize) -> Result<FieldDescriptor> {
    build_extension_bounded(p, degree, DEFAULT_MAX_ORDER)
}

/// Build `F_{p^e}` and fail with [`Error::SizeExceeded`] when `p^e > bound`.
///
/// Candidate moduli `x^e + c_{e-1} x^{e-1} + ... + c_0` are enumerated with
/// `(c_{e-1}, ..., c_0)` in lexicographic order and tested by trial division
/// by every monic polynomial of degree at most `e/2`.
pub fn build_extension_bounded(p: u32, degree: usize, bound: u64) -> Result<FieldDescriptor> {
    check_odd_prime(p)?;
    if degree == 0 {
        return Err(Error::BadParams("extension degree must be at least 1".into()));
    }
    let too_big = Error::SizeExceeded { p, degree, bound };
    if degree > MAX_EXT_DEGREE {
        return Err(too_big);
    }
    let order = (p as u64)
        .checked_pow(degree as u32)
        .filter(|&q| q <= bound && q < (1u64 << 32))
        .ok_or(too_big)?;
    let modulus = if degree == 1 {
        vec![0, 1]
    } else {
        (0..order)
            .map(|n| {
                let mut m = digits(n, p, degree);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial exists in every degree")
    };
    Ok(FieldDescriptor(Arc::new(Inner {
        p,
        degree,
        modulus,
        order,
    })))
}

fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push((n % p as u64) as u32);
        n /= p as u64;
    }
    out
}

/// Remainder of `f` modulo the monic `g` over `F_p` (coefficients low to high).
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().unwrap() % p64;
        if lead != 0 {
            let off = r.len() - dg;
            for (j, &gc) in g[..dg].iter().enumerate() {
                r[off + j] = (r[off + j] + p64 - lead * gc as u64 % p64) % p64;
            }
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let e = m.len() - 1;
    for d in 1..=e / 2 {
        for n in 0..(p as u64).pow(d as u32) {
            let mut g = digits(n, p, d);
            g.push(1);
            if poly_rem(m, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldDescriptor {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        build_extension(p, 1)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Cardinality `q = p^e`.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.degree == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::default()
    }

    pub fn one(&self) -> FieldElement {
        self.from_u32(1)
    }

    pub fn from_u32(&self, n: u32) -> FieldElement {
        let mut c = [0; MAX_EXT_DEGREE];
        c[0] = n % self.0.p;
        FieldElement { c }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_u32(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element from its coordinates in the modulus basis.
    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() > self.0.degree {
            return Err(Error::BadParams(format!(
                "{} coordinates for a degree-{} field",
                coords.len(),
                self.0.degree
            )));
        }
        let mut c = [0; MAX_EXT_DEGREE];
        for (slot, &x) in c.iter_mut().zip(coords) {
            *slot = x % self.0.p;
        }
        Ok(FieldElement { c })
    }

    /// The `index`-th element in the canonical enumeration (base-`p` digits of
    /// `index` are the coordinates, constant coordinate least significant).
    pub fn element(&self, index: u64) -> FieldElement {
        let mut c = [0; MAX_EXT_DEGREE];
        let mut n = index;
        for slot in c.iter_mut().take(self.0.degree) {
            *slot = (n % self.0.p as u64) as u32;
            n /= self.0.p as u64;
        }
        FieldElement { c }
    }

    /// Inverse of [`FieldDescriptor::element`].
    pub fn index_of(&self, a: &FieldElement) -> u64 {
        a.c[..self.0.degree]
            .iter()
            .rev()
            .fold(0u64, |acc, &x| acc * self.0.p as u64 + x as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.order).map(move |i| self.element(i))
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.c == [0; MAX_EXT_DEGREE]
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.0.p;
        let mut c = [0; MAX_EXT_DEGREE];
        for i in 0..self.0.degree {
            let s = a.c[i] + b.c[i];
            c[i] = if s >= p { s - p } else { s };
        }
        FieldElement { c }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.0.p;
        let mut c = [0; MAX_EXT_DEGREE];
        for i in 0..self.0.degree {
            c[i] = if a.c[i] == 0 { 0 } else { p - a.c[i] };
        }
        FieldElement { c }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.0.p as u64;
        let e = self.0.degree;
        let mut c = [0; MAX_EXT_DEGREE];
        if e == 1 {
            c[0] = ((a.c[0] as u64 * b.c[0] as u64) % p) as u32;
            return FieldElement { c };
        }
        let mut prod = [0u64; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..e {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + a.c[i] as u64 * b.c[j] as u64) % p;
            }
        }
        let m = &self.0.modulus;
        for k in (e..2 * e - 1).rev() {
            let t = prod[k];
            if t == 0 {
                continue;
            }
            for j in 0..e {
                let idx = k - e + j;
                prod[idx] = (prod[idx] + (p - t) * m[j] as u64) % p;
            }
        }
        for i in 0..e {
            c[i] = prod[i] as u32;
        }
        FieldElement { c }
    }

    pub fn pow(&self, a: &FieldElement, mut n: u64) -> FieldElement {
        let mut base = *a;
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

    /// Multiplicative inverse; extended Euclid over `F_p`, `a^(q-2)` otherwise.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::ZeroInverse);
        }
        if self.0.degree == 1 {
            return Ok(self.from_u32(inv_mod(a.c[0], self.0.p)));
        }
        Ok(self.pow(a, self.0.order - 2))
    }

    /// The Frobenius automorphism `a -> a^p`.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        if self.0.degree == 1 {
            *a
        } else {
            self.pow(a, self.0.p as u64)
        }
    }

    /// A generator of the cyclic group `F_q^x` (smallest in enumeration order).
    pub fn primitive_element(&self) -> FieldElement {
        let n = self.0.order - 1;
        let factors = prime_factors(n);
        (1..self.0.order)
            .map(|i| self.element(i))
            .find(|g| factors.iter().all(|&r| self.pow(g, n / r) != self.one()))
            .expect("multiplicative group is cyclic")
    }

    /// A primitive `k`-th root of unity, if `k` divides `q - 1`.
    pub fn root_of_unity(&self, k: u64) -> Option<FieldElement> {
        let n = self.0.order - 1;
        if k == 0 || !n.is_multiple_of(k) {
            return None;
        }
        Some(self.pow(&self.primitive_element(), n / k))
    }

    /// Short textual tag, e.g. `GF(7)` or `GF(3^2)`.
    pub fn tag(&self) -> String {
        if self.0.degree == 1 {
            format!("GF({})", self.0.p)
        } else {
            format!("GF({}^{})", self.0.p, self.0.degree)
        }
    }

    /// Deterministic text for an element: a residue in `[0, p)` for prime
    /// fields, a polynomial in the generator `g` otherwise.
    pub fn display(&self, a: &FieldElement) -> String {
        if self.0.degree == 1 {
            return a.c[0].to_string();
        }
        let mut out = String::new();
        for i in (0..self.0.degree).rev() {
            let x = a.c[i];
            if x == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            match (i, x) {
                (0, _) => write!(out, "{x}").unwrap(),
                (1, 1) => out.push('g'),
                (1, _) => write!(out, "{x}*g").unwrap(),
                (_, 1) => write!(out, "g^{i}").unwrap(),
                _ => write!(out, "{x}*g^{i}").unwrap(),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut old_r, mut r) = (a as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(p as i64) as u32
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        assert_eq!(f5.inv(&f5.from_u32(2)).unwrap(), f5.from_u32(3));
        assert_eq!(f5.inv(&f5.one()).unwrap(), f5.one());
        let f7 = FieldDescriptor::prime(7).unwrap();
        assert_eq!(f7.inv(&f7.from_u32(4)).unwrap(), f7.from_u32(2));
        assert_eq!(f7.inv(&f7.zero()), Err(Error::ZeroInverse));
    }

    #[test]
    fn rejects_even_and_composite() {
        assert_eq!(FieldDescriptor::prime(2), Err(Error::NotOddPrime(2)));
        assert_eq!(FieldDescriptor::prime(9), Err(Error::NotOddPrime(9)));
        assert!(matches!(
            build_extension_bounded(31, 3, 1000),
            Err(Error::SizeExceeded { .. })
        ));
    }

    #[test]
    fn gf9_modulus_is_x2_plus_1() {
        let f9 = build_extension(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(f9.order(), 9);
        let f5 = build_extension(5, 1).unwrap();
        assert_eq!(f5.modulus(), &[0, 1]);
    }

    #[test]
    fn modulus_has_no_roots() {
        for (p, e) in [(3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (3, 4)] {
            let f = build_extension(p, e).unwrap();
            let m = f.modulus();
            for x in 0..p as u64 {
                let v = m.iter().rev().fold(0u64, |acc, &c| (acc * x + c as u64) % p as u64);
                assert_ne!(v, 0, "root {x} of modulus for {p}^{e}");
            }
        }
    }

    #[test]
    fn group_laws_exhaustive_small_fields() {
        for (p, e) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (7, 2), (11, 2), (3, 4)] {
            let f = build_extension(p, e).unwrap();
            let q = f.order();
            assert!(q <= 2000);
            for a in f.elements().skip(1) {
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), f.one());
                assert_eq!(f.inv(&ai).unwrap(), a);
                assert_eq!(f.pow(&a, q - 1), f.one());
            }
            for a in f.elements() {
                assert_eq!(f.pow(&a, q), a);
            }
        }
    }

    #[test]
    fn enumeration_round_trips() {
        let f = build_extension(5, 2).unwrap();
        for i in 0..f.order() {
            assert_eq!(f.index_of(&f.element(i)), i);
        }
    }

    #[test]
    fn roots_of_unity() {
        let f7 = FieldDescriptor::prime(7).unwrap();
        let z = f7.root_of_unity(3).unwrap();
        assert_ne!(z, f7.one());
        assert_eq!(f7.pow(&z, 3), f7.one());
        assert!(f7.root_of_unity(4).is_none());
        assert_eq!(f7.root_of_unity(2).unwrap(), f7.from_int(-1));
    }
}
