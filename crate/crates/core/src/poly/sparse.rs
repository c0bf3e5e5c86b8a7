use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::monomial::{Monomial, MAX_VARS};
use crate::error::{Error, Result};
use crate::ring::CoeffRing;

/// Default cap on the number of terms produced by a checked operation.
pub const DEFAULT_TERM_CAP: usize = 10_000_000;

/// A polynomial ring `R[x_0, ..., x_{r-1}]` with named, ordered variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<R: CoeffRing> {
    coeffs: R,
    vars: Vec<String>,
}

impl<R: CoeffRing> PolyRing<R> {
    pub fn new<S: AsRef<str>>(coeffs: R, vars: &[S]) -> Result<Arc<Self>> {
        if vars.len() > MAX_VARS {
            return Err(Error::BadParams(format!(
                "{} variables, at most {MAX_VARS} supported",
                vars.len()
            )));
        }
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::BadParams(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::BadParams(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(PolyRing { coeffs, vars }))
    }

    pub fn coeffs(&self) -> &R {
        &self.coeffs
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// `GF(7)[a,b,c]`-style tag.
    pub fn tag(&self) -> String {
        format!("{}[{}]", self.coeffs.tag(), self.vars.join(","))
    }
}

pub(crate) fn same_ring<R: CoeffRing>(a: &Arc<PolyRing<R>>, b: &Arc<PolyRing<R>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A sparse multivariate polynomial. Terms are kept sorted by decreasing
/// monomial with no zero coefficients, so equal polynomials have identical
/// term lists.
#[derive(Clone)]
pub struct SparsePoly<R: CoeffRing> {
    ring: Arc<PolyRing<R>>,
    terms: Vec<(Monomial, R::Elem)>,
}

impl<R: CoeffRing> PartialEq for SparsePoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<R: CoeffRing> Eq for SparsePoly<R> {}

impl<R: CoeffRing> Hash for SparsePoly<R> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl<R: CoeffRing> Ord for SparsePoly<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(&other.terms) {
            let o = ma.cmp(mb).then_with(|| self.ring.coeffs.cmp_elem(ca, cb));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl<R: CoeffRing> PartialOrd for SparsePoly<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<R: CoeffRing> SparsePoly<R> {
    pub fn zero(ring: &Arc<PolyRing<R>>) -> Self {
        SparsePoly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing<R>>, c: R::Elem) -> Self {
        Self::monomial(ring, Monomial::ONE, c)
    }

    pub fn one(ring: &Arc<PolyRing<R>>) -> Self {
        Self::constant(ring, ring.coeffs.one())
    }

    pub fn from_int(ring: &Arc<PolyRing<R>>, n: i64) -> Self {
        Self::constant(ring, ring.coeffs.from_int(n))
    }

    pub fn monomial(ring: &Arc<PolyRing<R>>, m: Monomial, c: R::Elem) -> Self {
        let terms = if ring.coeffs.is_zero(&c) {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        SparsePoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Arc<PolyRing<R>>, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        Self::monomial(ring, Monomial::var(i, 1), ring.coeffs.one())
    }

    pub fn var_named(ring: &Arc<PolyRing<R>>, name: &str) -> Result<Self> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::DomainMismatch(format!("no variable `{name}` in {}", ring.tag())))?;
        Ok(Self::var(ring, i))
    }

    /// Build from arbitrary terms: sorted, like monomials combined, zeros dropped.
    pub fn from_terms(ring: &Arc<PolyRing<R>>, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> Self {
        let mut v: Vec<(Monomial, R::Elem)> = terms.into_iter().collect();
        v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self::from_sorted_with_duplicates(ring, v)
    }

    fn from_sorted_with_duplicates(ring: &Arc<PolyRing<R>>, v: Vec<(Monomial, R::Elem)>) -> Self {
        let k = &ring.coeffs;
        let mut out: Vec<(Monomial, R::Elem)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = k.add(lc, &c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if k.is_zero(lc) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if k.is_zero(lc) {
                out.pop();
            }
        }
        SparsePoly {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing<R>> {
        &self.ring
    }

    pub fn coeffs(&self) -> &R {
        &self.ring.coeffs
    }

    /// Terms in decreasing graded-lex order.
    pub fn terms(&self) -> &[(Monomial, R::Elem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_term(&self) -> R::Elem {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.ring.coeffs.zero(),
        }
    }

    /// Leading term under graded-lex.
    pub fn leading(&self) -> Option<&(Monomial, R::Elem)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    /// Coefficient of a given monomial.
    pub fn coeff(&self, m: &Monomial) -> R::Elem {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.coeffs.zero(),
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "{} vs {}",
                self.ring.tag(),
                other.ring.tag()
            )))
        }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let k = &self.ring.coeffs;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { k.neg(&b[j].1) } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        k.sub(&a[i].1, &b[j].1)
                    } else {
                        k.add(&a[i].1, &b[j].1)
                    };
                    if !k.is_zero(&c) {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for (m, c) in &b[j..] {
            out.push((*m, if negate { k.neg(c) } else { c.clone() }));
        }
        SparsePoly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.checked_mul_capped(other, DEFAULT_TERM_CAP)
    }

    /// Product, failing when the result would exceed `cap` terms.
    pub fn checked_mul_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        self.check_ring(other)?;
        let out = self.mul_unchecked(other);
        if out.len() > cap {
            return Err(Error::BudgetExceeded {
                what: "polynomial terms".into(),
                needed: out.len() as u128,
                budget: cap as u128,
            });
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let k = &self.ring.coeffs;
        SparsePoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, k.neg(c))).collect(),
        }
    }

    pub fn scale(&self, s: &R::Elem) -> Self {
        let k = &self.ring.coeffs;
        if k.is_zero(s) {
            return Self::zero(&self.ring);
        }
        SparsePoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, k.mul(c, s))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, s: &R::Elem) -> Self {
        let k = &self.ring.coeffs;
        if k.is_zero(s) {
            return Self::zero(&self.ring);
        }
        SparsePoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), k.mul(c, s))).collect(),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() <= 8 {
            let mut acc = Self::zero(&self.ring);
            for (m, c) in &small.terms {
                acc = acc.merge(&big.mul_term(m, c), false);
            }
            return acc;
        }
        let k = &self.ring.coeffs;
        let mut prods = Vec::with_capacity(small.len() * big.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                prods.push((ma.mul(mb), k.mul(ca, cb)));
            }
        }
        prods.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self::from_sorted_with_duplicates(&self.ring, prods)
    }

    /// `self^e`. In characteristic `p` the `p`-part of the exponent is handled
    /// by [`SparsePoly::frobenius_power`].
    pub fn pow(&self, e: u64) -> Self {
        let p = self.ring.coeffs.characteristic() as u64;
        if e == 0 {
            return Self::one(&self.ring);
        }
        if p > 0 && e >= p {
            let frob = self.frobenius_power().expect("finite characteristic");
            let high = frob.pow(e / p);
            return if e.is_multiple_of(p) {
                high
            } else {
                high.mul_unchecked(&self.pow(e % p))
            };
        }
        if self.len() <= 8 {
            let mut acc = self.clone();
            for _ in 1..e {
                acc = acc.mul_unchecked(self);
            }
            return acc;
        }
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        let mut n = e;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `f^p = f^sigma(x_1^p, ..., x_r^p)` where sigma is the coefficient
    /// Frobenius.
    pub fn frobenius_power(&self) -> Result<Self> {
        let k = &self.ring.coeffs;
        let p = k.characteristic();
        if p == 0 {
            return Err(Error::DomainMismatch(
                "Frobenius needs a finite coefficient field".into(),
            ));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.scale_exponents(p), k.frobenius(c).expect("finite field")))
            .collect();
        Ok(SparsePoly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn derivative(&self, var: usize) -> Self {
        let k = &self.ring.coeffs;
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(var);
            if e == 0 {
                return None;
            }
            let c = k.mul(c, &k.from_int(e as i64));
            (!k.is_zero(&c)).then(|| (m.with_exponent(var, e - 1), c))
        });
        // Dividing by the variable preserves the monomial order.
        SparsePoly {
            ring: self.ring.clone(),
            terms: terms.collect(),
        }
    }

    /// Evaluate at a point given as one coefficient per ring variable.
    pub fn evaluate(&self, point: &[R::Elem]) -> R::Elem {
        let k = &self.ring.coeffs;
        let n = self.ring.nvars();
        assert_eq!(point.len(), n, "point dimension");
        let mut powers: Vec<Vec<R::Elem>> = Vec::with_capacity(n);
        for (v, x) in point.iter().enumerate() {
            let d = self.degree_in(v) as usize;
            let mut row = Vec::with_capacity(d + 1);
            row.push(k.one());
            for i in 0..d {
                let next = k.mul(&row[i], x);
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = k.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, row) in powers.iter().enumerate() {
                let e = m.exponent(v) as usize;
                if e > 0 {
                    t = k.mul(&t, &row[e]);
                }
            }
            acc = k.add(&acc, &t);
        }
        acc
    }

    /// The coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, var: usize, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) == k)
            .map(|(m, c)| (m.with_exponent(var, 0), c.clone()));
        Self::from_terms(&self.ring, terms)
    }

    /// Split off the leading coefficient: `self = lc * monic`.
    pub fn monic(&self) -> Option<(R::Elem, Self)> {
        let (_, lc) = self.leading()?;
        let k = &self.ring.coeffs;
        let inv = k.inv(lc)?;
        let lc = lc.clone();
        Some((lc, self.scale(&inv)))
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self`.
    /// A single polynomial is a Groebner basis of its ideal, so the division
    /// algorithm leaves remainder zero exactly when `g` divides `self`; the
    /// loop gives up at the first non-reducible leading term.
    pub fn try_div_exact(&self, g: &Self) -> Option<Self> {
        let k = &self.ring.coeffs;
        let (lm, lc) = g.leading()?;
        if self.is_zero() {
            return Some(Self::zero(&self.ring));
        }
        if self.total_degree() < g.total_degree() {
            return None;
        }
        let lc_inv = k.inv(lc)?;
        let mut rem: BTreeMap<Monomial, R::Elem> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(lm)?;
            let qc = k.mul(&c, &lc_inv);
            for (gm, gc) in &g.terms[1..] {
                let mm = gm.mul(&qm);
                let delta = k.mul(gc, &qc);
                match rem.entry(mm) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let v = k.sub(e.get(), &delta);
                        if k.is_zero(&v) {
                            e.remove();
                        } else {
                            *e.get_mut() = v;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(k.neg(&delta));
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(SparsePoly {
            ring: self.ring.clone(),
            terms: quot,
        })
    }

    /// Transport into another ring with the same variable layout, mapping
    /// each coefficient; `None` when some coefficient has no image.
    pub fn map_coeffs<S: CoeffRing>(
        &self,
        ring: &Arc<PolyRing<S>>,
        f: impl Fn(&R::Elem) -> Option<S::Elem>,
    ) -> Option<SparsePoly<S>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((*m, f(c)?));
        }
        Some(SparsePoly::from_terms(ring, terms))
    }

    fn fmt_monomial(&self, m: &Monomial, out: &mut String) {
        let mut first = true;
        for (i, v) in self.ring.vars.iter().enumerate() {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(v);
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
}

impl<R: CoeffRing> fmt::Display for SparsePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let k = &self.ring.coeffs;
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = k.is_negative(c);
            let abs = if negative { k.neg(c) } else { c.clone() };
            out.push_str(match (i, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            });
            let (s, atomic) = k.write_elem(&abs);
            let s = if atomic { s } else { format!("({s})") };
            if m.is_one() {
                out.push_str(&s);
            } else {
                if !k.is_one(&abs) {
                    out.push_str(&s);
                    out.push('*');
                }
                self.fmt_monomial(m, &mut out);
            }
        }
        f.write_str(&out)
    }
}

impl<R: CoeffRing> fmt::Debug for SparsePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.ring.tag(), self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<R: CoeffRing> $tr<&SparsePoly<R>> for &SparsePoly<R> {
            type Output = SparsePoly<R>;
            fn $method(self, rhs: &SparsePoly<R>) -> SparsePoly<R> {
                self.$checked(rhs).expect("operands from different rings")
            }
        }
        impl<R: CoeffRing> $tr<SparsePoly<R>> for SparsePoly<R> {
            type Output = SparsePoly<R>;
            fn $method(self, rhs: SparsePoly<R>) -> SparsePoly<R> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);

impl<R: CoeffRing> Mul<&SparsePoly<R>> for &SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn mul(self, rhs: &SparsePoly<R>) -> SparsePoly<R> {
        assert!(same_ring(&self.ring, &rhs.ring), "operands from different rings");
        self.mul_unchecked(rhs)
    }
}

impl<R: CoeffRing> Mul<SparsePoly<R>> for SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn mul(self, rhs: SparsePoly<R>) -> SparsePoly<R> {
        &self * &rhs
    }
}

impl<R: CoeffRing> Neg for &SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn neg(self) -> SparsePoly<R> {
        SparsePoly::neg(self)
    }
}

impl<R: CoeffRing> Neg for SparsePoly<R> {
    type Output = SparsePoly<R>;
    fn neg(self) -> SparsePoly<R> {
        SparsePoly::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{build_extension, FieldDescriptor};

    fn ring(p: u32, vars: &[&str]) -> Arc<PolyRing<FieldDescriptor>> {
        PolyRing::new(FieldDescriptor::prime(p).unwrap(), vars).unwrap()
    }

    #[test]
    fn difference_of_squares_mod_five() {
        let r = ring(5, &["T"]);
        let t = SparsePoly::var(&r, 0);
        let one = SparsePoly::one(&r);
        let prod = &(&t + &one) * &(&t - &one);
        assert_eq!(prod.to_string(), "T^2 + 4");
        assert_eq!(&prod + &SparsePoly::zero(&r), prod);
    }

    #[test]
    fn frobenius_of_one_minus_a() {
        let r = ring(5, &["a"]);
        let f = &SparsePoly::one(&r) - &SparsePoly::var(&r, 0);
        assert_eq!(f.frobenius_power().unwrap().to_string(), "4*a^5 + 1");
        assert_eq!(f.frobenius_power().unwrap(), f.pow(5));
    }

    #[test]
    fn derivative_kills_pth_powers() {
        let r = ring(7, &["T"]);
        let t = SparsePoly::var(&r, 0);
        assert!(t.pow(7).derivative(0).is_zero());
        assert_eq!(t.pow(3).derivative(0).to_string(), "3*T^2");
    }

    #[test]
    fn coefficient_extraction() {
        let r = ring(5, &["a", "b", "c"]);
        let (a, b, c) = (SparsePoly::var(&r, 0), SparsePoly::var(&r, 1), SparsePoly::var(&r, 2));
        let f = &(&c * &a) + &(&c.pow(5) * &b);
        assert_eq!(f.coefficient_of(2, 5), b);
        assert!(a.coefficient_of(2, 3).is_zero());
    }

    #[test]
    fn exact_division() {
        let r = ring(7, &["x", "y"]);
        let (x, y) = (SparsePoly::var(&r, 0), SparsePoly::var(&r, 1));
        let g = &x - &y;
        let h = &(&x * &x) + &(&y + &SparsePoly::from_int(&r, 3));
        let f = &g * &h;
        assert_eq!(f.try_div_exact(&g), Some(h.clone()));
        assert_eq!(f.try_div_exact(&h), Some(g.clone()));
        assert_eq!(h.try_div_exact(&g), None);
    }

    #[test]
    fn mixing_rings_is_an_error() {
        let r1 = ring(5, &["a"]);
        let r2 = ring(7, &["a"]);
        let e = SparsePoly::var(&r1, 0).checked_add(&SparsePoly::var(&r2, 0));
        assert!(matches!(e, Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn extension_frobenius_is_pth_power() {
        let f9 = build_extension(3, 2).unwrap();
        let r = PolyRing::new(f9.clone(), &["x", "y"]).unwrap();
        let g = f9.from_coords(&[1, 1]).unwrap();
        let p = &SparsePoly::monomial(&r, Monomial::var(0, 2), g)
            + &(&SparsePoly::var(&r, 1) + &SparsePoly::from_int(&r, 2));
        assert_eq!(p.frobenius_power().unwrap(), p.pow(3));
    }
}
