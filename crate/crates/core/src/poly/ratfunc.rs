use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::sparse::{same_ring, PolyRing, SparsePoly};
use crate::error::{Error, Result};
use crate::ring::CoeffRing;

type Factors<R> = BTreeMap<SparsePoly<R>, u32>;

/// A rational function `unit * prod num_i^{e_i} / prod den_j^{f_j}`.
///
/// Every stored factor is monic under graded-lex and non-constant, and no
/// polynomial appears on both sides. Factors are whatever the construction
/// produced (no factorization is attempted), so two equal functions may be
/// stored differently; equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct RatFunc<R: CoeffRing> {
    ring: Arc<PolyRing<R>>,
    unit: R::Elem,
    num: Factors<R>,
    den: Factors<R>,
}

fn add_factor<R: CoeffRing>(map: &mut Factors<R>, f: SparsePoly<R>, e: u32) {
    if e > 0 {
        *map.entry(f).or_insert(0) += e;
    }
}

fn cancel<R: CoeffRing>(num: &mut Factors<R>, den: &mut Factors<R>) {
    let common: Vec<SparsePoly<R>> = num.keys().filter(|k| den.contains_key(*k)).cloned().collect();
    for f in common {
        let a = num[&f];
        let b = den[&f];
        let m = a.min(b);
        if a == m {
            num.remove(&f);
        } else {
            *num.get_mut(&f).unwrap() -= m;
        }
        if b == m {
            den.remove(&f);
        } else {
            *den.get_mut(&f).unwrap() -= m;
        }
    }
}

fn expand<R: CoeffRing>(ring: &Arc<PolyRing<R>>, map: &Factors<R>) -> SparsePoly<R> {
    let mut acc = SparsePoly::one(ring);
    for (f, &e) in map {
        acc = &acc * &f.pow(e as u64);
    }
    acc
}

impl<R: CoeffRing> RatFunc<R> {
    pub fn zero(ring: &Arc<PolyRing<R>>) -> Self {
        RatFunc {
            ring: ring.clone(),
            unit: ring.coeffs().zero(),
            num: BTreeMap::new(),
            den: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing<R>>, c: R::Elem) -> Self {
        RatFunc {
            ring: ring.clone(),
            unit: c,
            num: BTreeMap::new(),
            den: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing<R>>) -> Self {
        Self::constant(ring, ring.coeffs().one())
    }

    pub fn from_int(ring: &Arc<PolyRing<R>>, n: i64) -> Self {
        Self::constant(ring, ring.coeffs().from_int(n))
    }

    pub fn var(ring: &Arc<PolyRing<R>>, i: usize) -> Self {
        Self::from_poly(SparsePoly::var(ring, i))
    }

    pub fn from_poly(f: SparsePoly<R>) -> Self {
        let ring = f.ring().clone();
        match f.monic() {
            None => Self::zero(&ring),
            Some((lc, m)) => {
                let mut num = BTreeMap::new();
                if !m.is_constant() {
                    num.insert(m, 1);
                }
                RatFunc {
                    ring,
                    unit: lc,
                    num,
                    den: BTreeMap::new(),
                }
            }
        }
    }

    /// `num / den`, with syntactic cancellation only.
    pub fn from_parts(num: SparsePoly<R>, den: SparsePoly<R>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::from_poly(num).div(&Self::from_poly(den))
    }

    pub fn ring(&self) -> &Arc<PolyRing<R>> {
        &self.ring
    }

    pub fn coeffs(&self) -> &R {
        self.ring.coeffs()
    }

    pub fn unit(&self) -> &R::Elem {
        &self.unit
    }

    pub fn num_factors(&self) -> &BTreeMap<SparsePoly<R>, u32> {
        &self.num
    }

    pub fn den_factors(&self) -> &BTreeMap<SparsePoly<R>, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().is_zero(&self.unit)
    }

    /// The value, when the function is a constant.
    pub fn as_constant(&self) -> Option<&R::Elem> {
        (self.num.is_empty() && self.den.is_empty()).then_some(&self.unit)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// Expanded numerator (including the scalar unit).
    pub fn numerator(&self) -> SparsePoly<R> {
        expand(&self.ring, &self.num).scale(&self.unit)
    }

    /// Expanded monic denominator.
    pub fn denominator(&self) -> SparsePoly<R> {
        expand(&self.ring, &self.den)
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

    pub fn mul(&self, other: &Self) -> Self {
        assert!(same_ring(&self.ring, &other.ring), "operands from different rings");
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (f, &e) in &other.num {
            add_factor(&mut num, f.clone(), e);
        }
        for (f, &e) in &other.den {
            add_factor(&mut den, f.clone(), e);
        }
        cancel(&mut num, &mut den);
        RatFunc {
            ring: self.ring.clone(),
            unit: self.coeffs().mul(&self.unit, &other.unit),
            num,
            den,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let unit = self.coeffs().inv(&self.unit).ok_or(Error::ZeroDenominator)?;
        Ok(RatFunc {
            ring: self.ring.clone(),
            unit,
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.mul(&other.inv()?))
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            unit: self.coeffs().neg(&self.unit),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        if self.coeffs().is_zero(c) {
            return Self::zero(&self.ring);
        }
        RatFunc {
            unit: self.coeffs().mul(&self.unit, c),
            ..self.clone()
        }
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        if n == 0 {
            return Ok(Self::one(&self.ring));
        }
        let e = n as u32;
        Ok(RatFunc {
            ring: self.ring.clone(),
            unit: self.coeffs().pow(&self.unit, n as u64),
            num: self.num.iter().map(|(f, k)| (f.clone(), k * e)).collect(),
            den: self.den.iter().map(|(f, k)| (f.clone(), k * e)).collect(),
        })
    }

    /// `self^p` over a field of characteristic `p`. Stored factors keep their
    /// identity (only exponents are scaled), which is what lets a Frobeniized
    /// coefficient cancel the denominator of an argument.
    pub fn frobenius(&self) -> Result<Self> {
        let k = self.coeffs();
        let p = k.characteristic();
        let unit = k
            .frobenius(&self.unit)
            .ok_or_else(|| Error::DomainMismatch("Frobenius needs a finite coefficient field".into()))?;
        Ok(RatFunc {
            ring: self.ring.clone(),
            unit,
            num: self.num.iter().map(|(f, e)| (f.clone(), e * p)).collect(),
            den: self.den.iter().map(|(f, e)| (f.clone(), e * p)).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(Self::sum(&self.ring, vec![self.clone(), other.clone()]))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(Self::sum(&self.ring, vec![self.clone(), other.neg()]))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("operands from different rings")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("operands from different rings")
    }

    /// Sum over a common denominator. Numerator factors shared by every
    /// summand are kept factored; afterwards each denominator factor is
    /// divided out of the new numerator as often as it divides exactly.
    /// Summands are expanded in parallel.
    pub fn sum(ring: &Arc<PolyRing<R>>, items: Vec<Self>) -> Self {
        let mut items: Vec<Self> = items.into_iter().filter(|r| !r.is_zero()).collect();
        match items.len() {
            0 => return Self::zero(ring),
            1 => return items.pop().unwrap(),
            _ => {}
        }
        let mut common = items[0].num.clone();
        for r in &items[1..] {
            common.retain(|f, e| match r.num.get(f) {
                Some(&x) => {
                    *e = (*e).min(x);
                    true
                }
                None => false,
            });
        }
        let mut lcm: Factors<R> = BTreeMap::new();
        for r in &items {
            for (f, &e) in &r.den {
                let slot = lcm.entry(f.clone()).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        let parts: Vec<SparsePoly<R>> = items
            .par_iter()
            .map(|r| {
                let mut rest = r.num.clone();
                for (f, e) in &common {
                    let left = rest[f] - e;
                    if left == 0 {
                        rest.remove(f);
                    } else {
                        rest.insert(f.clone(), left);
                    }
                }
                let mut cof = lcm.clone();
                for (f, e) in &r.den {
                    let left = cof[f] - e;
                    if left == 0 {
                        cof.remove(f);
                    } else {
                        cof.insert(f.clone(), left);
                    }
                }
                let prod = if rest.len() + cof.len() == 0 {
                    SparsePoly::one(ring)
                } else {
                    &expand(ring, &rest) * &expand(ring, &cof)
                };
                prod.scale(&r.unit)
            })
            .collect();
        let total = parts.into_par_iter().reduce(|| SparsePoly::zero(ring), |a, b| &a + &b);
        let Some((unit, mut n)) = total.monic() else {
            return Self::zero(ring);
        };
        let mut den = BTreeMap::new();
        for (f, e) in lcm {
            let mut e = e;
            while e > 0 && !n.is_constant() {
                match n.try_div_exact(&f) {
                    Some(q) => {
                        n = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                den.insert(f, e);
            }
        }
        let mut num = common;
        if !n.is_constant() {
            add_factor(&mut num, n, 1);
        }
        cancel(&mut num, &mut den);
        RatFunc {
            ring: ring.clone(),
            unit,
            num,
            den,
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        if self.is_zero() {
            return Self::zero(&self.ring);
        }
        let k = self.coeffs();
        let mut logs = Vec::new();
        for (f, &e) in &self.num {
            let d = f.derivative(var).scale(&k.from_int(e as i64));
            logs.push(Self::from_poly(d).mul(&Self::from_poly(f.clone()).inv().unwrap()));
        }
        for (g, &e) in &self.den {
            let d = g.derivative(var).scale(&k.from_int(-(e as i64)));
            logs.push(Self::from_poly(d).mul(&Self::from_poly(g.clone()).inv().unwrap()));
        }
        self.mul(&Self::sum(&self.ring, logs))
    }

    /// Value at a point; [`Error::InadmissiblePoint`] if a denominator factor
    /// vanishes there.
    pub fn evaluate(&self, point: &[R::Elem]) -> Result<R::Elem> {
        let k = self.coeffs();
        let mut d = k.one();
        for (g, &e) in &self.den {
            let v = g.evaluate(point);
            if k.is_zero(&v) {
                return Err(Error::InadmissiblePoint);
            }
            d = k.mul(&d, &k.pow(&v, e as u64));
        }
        let mut n = self.unit.clone();
        for (f, &e) in &self.num {
            n = k.mul(&n, &k.pow(&f.evaluate(point), e as u64));
        }
        Ok(k.mul(&n, &k.inv(&d).expect("nonzero")))
    }

    /// Substitute one rational function (in `target`) per variable of this
    /// function's ring.
    pub fn compose(&self, target: &Arc<PolyRing<R>>, assign: &[RatFunc<R>]) -> Result<Self> {
        let mut acc = Self::constant(target, self.unit.clone());
        for (f, &e) in &self.num {
            acc = acc.mul(&f.compose(target, assign)?.pow(e as i64)?);
        }
        for (g, &e) in &self.den {
            let v = g.compose(target, assign)?;
            if v.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            acc = acc.mul(&v.pow(-(e as i64))?);
        }
        Ok(acc)
    }

    /// Substitute some variables, keeping the others, within the same ring.
    pub fn substitute(&self, assign: &[(usize, RatFunc<R>)]) -> Result<Self> {
        let vals = identity_assignment(&self.ring, assign);
        self.compose(&self.ring, &vals)
    }

    /// Deterministic total order used to pick canonical representatives:
    /// expanded denominators first, then numerators.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.denominator()
            .cmp(&other.denominator())
            .then_with(|| self.numerator().cmp(&other.numerator()))
    }

    /// Text form with the ring tag, e.g. `GF(7)[a,b]: (a + 1)/(b)`.
    pub fn to_text(&self) -> String {
        format!("{}: {}", self.ring.tag(), self)
    }

    /// Transport into another ring with the same variables, mapping each
    /// coefficient. Returns `Ok(None)` if some coefficient has no image, and
    /// an error if a denominator factor maps to zero.
    pub fn map_coeffs<S: CoeffRing>(
        &self,
        ring: &Arc<PolyRing<S>>,
        f: impl Fn(&R::Elem) -> Option<S::Elem> + Copy,
    ) -> Result<Option<RatFunc<S>>> {
        let Some(unit) = f(&self.unit) else {
            return Ok(None);
        };
        let mut acc = RatFunc::constant(ring, unit);
        for (g, &e) in &self.num {
            let Some(img) = g.map_coeffs(ring, f) else {
                return Ok(None);
            };
            acc = acc.mul(&RatFunc::from_poly(img).pow(e as i64)?);
        }
        for (g, &e) in &self.den {
            let Some(img) = g.map_coeffs(ring, f) else {
                return Ok(None);
            };
            if img.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            acc = acc.mul(&RatFunc::from_poly(img).pow(-(e as i64))?);
        }
        Ok(Some(acc))
    }
}

pub(crate) fn identity_assignment<R: CoeffRing>(
    ring: &Arc<PolyRing<R>>,
    assign: &[(usize, RatFunc<R>)],
) -> Vec<RatFunc<R>> {
    let mut vals: Vec<RatFunc<R>> = (0..ring.nvars()).map(|i| RatFunc::var(ring, i)).collect();
    for (i, v) in assign {
        vals[*i] = v.clone();
    }
    vals
}

impl<R: CoeffRing> SparsePoly<R> {
    /// `self(x_0 = r_0, ..., x_{n-1} = r_{n-1})` with the `r_i` in `target`.
    /// Each `r_i = N_i / D_i` contributes `D_i^{deg_i}` to a common
    /// denominator, kept factored.
    pub fn compose(&self, target: &Arc<PolyRing<R>>, assign: &[RatFunc<R>]) -> Result<RatFunc<R>> {
        let n = self.ring().nvars();
        if assign.len() != n {
            return Err(Error::BadParams(format!(
                "{} assignments for {} variables",
                assign.len(),
                n
            )));
        }
        for r in assign {
            if !same_ring(r.ring(), target) {
                return Err(Error::DomainMismatch("assignment outside target ring".into()));
            }
        }
        if self.is_zero() {
            return Ok(RatFunc::zero(target));
        }
        let degs: Vec<u32> = (0..n).map(|v| self.degree_in(v)).collect();
        let mut num_pows: Vec<Vec<SparsePoly<R>>> = Vec::with_capacity(n);
        let mut den_pows: Vec<Vec<SparsePoly<R>>> = Vec::with_capacity(n);
        for (v, r) in assign.iter().enumerate() {
            let d = degs[v] as usize;
            let (nv, dv) = (r.numerator(), r.denominator());
            let mut np = vec![SparsePoly::one(target)];
            let mut dp = vec![SparsePoly::one(target)];
            for i in 0..d {
                np.push(&np[i] * &nv);
                dp.push(&dp[i] * &dv);
            }
            num_pows.push(np);
            den_pows.push(dp);
        }
        let parts: Vec<SparsePoly<R>> = self
            .terms()
            .par_iter()
            .map(|(m, c)| {
                let mut t = SparsePoly::constant(target, c.clone());
                for v in 0..n {
                    let e = m.exponent(v) as usize;
                    let d = degs[v] as usize;
                    if e > 0 {
                        t = &t * &num_pows[v][e];
                    }
                    if d > e {
                        t = &t * &den_pows[v][d - e];
                    }
                }
                t
            })
            .collect();
        let total = parts
            .into_par_iter()
            .reduce(|| SparsePoly::zero(target), |a, b| &a + &b);
        let mut out = RatFunc::from_poly(total);
        for (v, r) in assign.iter().enumerate() {
            if degs[v] == 0 {
                continue;
            }
            let mut den = RatFunc::one(target);
            for (g, &e) in r.den_factors() {
                den.num.insert(g.clone(), e * degs[v]);
            }
            out = out.div(&den)?;
        }
        Ok(out)
    }
}

impl<R: CoeffRing> PartialEq for RatFunc<R> {
    fn eq(&self, other: &Self) -> bool {
        if !same_ring(&self.ring, &other.ring) {
            return false;
        }
        if self.unit == other.unit && self.num == other.num && self.den == other.den {
            return true;
        }
        self.sub(other).is_zero()
    }
}

impl<R: CoeffRing> fmt::Display for RatFunc<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.numerator();
        if self.den.is_empty() {
            write!(f, "{n}")
        } else {
            write!(f, "({n})/({})", self.denominator())
        }
    }
}

impl<R: CoeffRing> fmt::Debug for RatFunc<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::ring::Rationals;

    fn ring(p: u32, vars: &[&str]) -> Arc<PolyRing<FieldDescriptor>> {
        PolyRing::new(FieldDescriptor::prime(p).unwrap(), vars).unwrap()
    }

    #[test]
    fn cancellation_of_one_minus_t() {
        let r = ring(5, &["T"]);
        let t = RatFunc::var(&r, 0);
        let one_minus = RatFunc::one(&r).sub(&t);
        let q = RatFunc::one(&r).div(&one_minus).unwrap();
        assert_eq!(q.mul(&one_minus).as_constant(), Some(&r.coeffs().one()));
    }

    #[test]
    fn sum_reduces_exactly() {
        let r = ring(7, &["x", "y"]);
        let x = RatFunc::var(&r, 0);
        let y = RatFunc::var(&r, 1);
        // x/(x-y) - y/(x-y) = 1
        let d = x.sub(&y);
        let s = x.div(&d).unwrap().sub(&y.div(&d).unwrap());
        assert_eq!(s.as_constant(), Some(&r.coeffs().one()));
    }

    #[test]
    fn quotient_rule() {
        let r = ring(11, &["x", "y"]);
        let x = RatFunc::var(&r, 0);
        let y = RatFunc::var(&r, 1);
        let f = x.div(&RatFunc::one(&r).sub(&y)).unwrap();
        assert_eq!(
            f.derivative(0),
            RatFunc::one(&r).div(&RatFunc::one(&r).sub(&y)).unwrap()
        );
        let expected = x.div(&RatFunc::one(&r).sub(&y).pow(2).unwrap()).unwrap();
        assert_eq!(f.derivative(1), expected);
    }

    #[test]
    fn evaluate_pole_is_inadmissible() {
        let r = ring(5, &["T"]);
        let f = RatFunc::one(&r)
            .div(&RatFunc::one(&r).sub(&RatFunc::var(&r, 0)))
            .unwrap();
        let one = r.coeffs().one();
        assert_eq!(f.evaluate(&[one]), Err(Error::InadmissiblePoint));
    }

    #[test]
    fn compose_t_to_inverse() {
        let r = ring(5, &["T"]);
        let t = SparsePoly::var(&r, 0);
        let inv_t = RatFunc::one(&r).div(&RatFunc::var(&r, 0)).unwrap();
        let out = t.pow(5).compose(&r, std::slice::from_ref(&inv_t)).unwrap();
        assert_eq!(out, inv_t.pow(5).unwrap());
        let id = t.compose(&r, &[RatFunc::var(&r, 0)]).unwrap();
        assert_eq!(id, RatFunc::var(&r, 0));
    }

    #[test]
    fn rational_coefficients_print() {
        let r = PolyRing::new(Rationals, &["z"]).unwrap();
        let z = RatFunc::var(&r, 0);
        let half = RatFunc::constant(&r, num_rational::BigRational::new(1.into(), 2.into()));
        let f = z.mul(&half).sub(&RatFunc::one(&r));
        assert_eq!(f.to_string(), "(1/2)*z - 1");
        let g = RatFunc::one(&r).div(&f).unwrap();
        assert_eq!(g.to_string(), "(2)/(z - 2)");
    }
}
