//! Symbolic layer for p-adic polylogarithm combinations
//! `F_n = sum_k a_k log^k(z) Li_{n-k}(z)`.
//!
//! Elements live in the free differential ring `Q(z)[L, P_1, ..., P_N]`
//! with `dL/dz = 1/z`, `dP_1/dz = 1/(1-z)` and `dP_k/dz = P_{k-1}/z`.
//! No analytic identity between the generators is imposed.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::ExactRational;
use crate::poly::{PolyRing, RatFunc};
use crate::ring::Rationals;

pub const DEFAULT_DEPTH: usize = 12;

/// `Q[z]`, shared by every element.
pub fn z_ring() -> &'static Arc<PolyRing<Rationals>> {
    static RING: OnceLock<Arc<PolyRing<Rationals>>> = OnceLock::new();
    RING.get_or_init(|| PolyRing::new(Rationals, &["z"]).expect("one variable"))
}

fn rf(text: &str) -> RatFunc<Rationals> {
    crate::poly::parse_ratfunc(z_ring(), text).expect("fixed expression")
}

fn rat(n: i64) -> ExactRational {
    ExactRational::from_integer(n.into())
}

/// Polynomial in `L, P_1..P_N` with coefficients in `Q(z)`. Keys are
/// exponent vectors `(e_L, e_P1, ..., e_PN)`.
#[derive(Clone, Debug)]
pub struct DiffRingElement {
    depth: usize,
    terms: BTreeMap<Vec<u32>, RatFunc<Rationals>>,
}

impl DiffRingElement {
    pub fn zero(depth: usize) -> Self {
        DiffRingElement {
            depth,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(depth: usize, c: RatFunc<Rationals>) -> Self {
        let mut e = Self::zero(depth);
        e.add_term(vec![0; depth + 1], c);
        e
    }

    /// `L = log z`.
    pub fn log(depth: usize) -> Self {
        let mut k = vec![0; depth + 1];
        k[0] = 1;
        let mut e = Self::zero(depth);
        e.add_term(k, RatFunc::one(z_ring()));
        e
    }

    /// `P_k = Li_k(z)`.
    pub fn li(depth: usize, k: usize) -> Result<Self> {
        if k == 0 || k > depth {
            return Err(Error::DepthExceeded { n: k, depth });
        }
        let mut key = vec![0; depth + 1];
        key[k] = 1;
        let mut e = Self::zero(depth);
        e.add_term(key, RatFunc::one(z_ring()));
        Ok(e)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, RatFunc<Rationals>> {
        &self.terms
    }

    fn add_term(&mut self, key: Vec<u32>, c: RatFunc<Rationals>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&RatFunc::from_int(z_ring(), -1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RatFunc<Rationals>) -> Self {
        let mut out = Self::zero(self.depth);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.mul(c));
        }
        out
    }

    pub fn scale_rational(&self, c: &ExactRational) -> Self {
        self.scale(&RatFunc::constant(z_ring(), c.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.depth.max(other.depth));
        let width = out.depth + 1;
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let key = (0..width)
                    .map(|i| k1.get(i).copied().unwrap_or(0) + k2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(key, c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(self.depth, RatFunc::one(z_ring()));
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Derivative of a single generator: index 0 is `L`, index `k` is `P_k`.
    fn d_generator(&self, g: usize) -> Self {
        match g {
            0 => Self::constant(self.depth, rf("1/z")),
            1 => Self::constant(self.depth, rf("1/(1-z)")),
            k => Self::li(self.depth, k - 1)
                .expect("index below depth")
                .scale(&rf("1/z")),
        }
    }

    pub fn d_dz(&self) -> Self {
        let mut out = Self::zero(self.depth);
        for (key, c) in &self.terms {
            out.add_term(key.clone(), c.derivative(0));
            for (g, &e) in key.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut lowered = key.clone();
                lowered[g] -= 1;
                let mut rest = Self::zero(self.depth);
                rest.add_term(lowered, c.mul(&RatFunc::from_int(z_ring(), e as i64)));
                out = out.add(&rest.mul(&self.d_generator(g)));
            }
        }
        out
    }

    /// `D = z (1 - z) d/dz`.
    pub fn big_d(&self) -> Self {
        self.d_dz().scale(&rf("z*(1-z)"))
    }

    /// Deterministic text, highest monomials first.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| {
                let mut gens = Vec::new();
                for (g, &e) in k.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let name = if g == 0 { "L".to_string() } else { format!("P{g}") };
                    gens.push(if e == 1 { name } else { format!("{name}^{e}") });
                }
                if gens.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", gens.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl PartialEq for DiffRingElement {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Display for DiffRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn factorial(n: usize) -> ExactRational {
    (1..=n as i64).fold(ExactRational::one(), |acc, k| acc * rat(k))
}

/// `a_k = (-1)^k (k - n) / k!` for `k = 0..n-1`.
pub fn besser_coefficients(n: usize) -> Vec<ExactRational> {
    (0..n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            rat(sign * (k as i64 - n as i64)) / factorial(k)
        })
        .collect()
}

/// `sum_{k<n} a_k / (n-k)!`, with `n` the length of `coeffs`.
pub fn clean_sum(coeffs: &[ExactRational]) -> ExactRational {
    let n = coeffs.len();
    coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a / factorial(n - k))
        .fold(ExactRational::zero(), |acc, x| acc + x)
}

pub fn clean_check(coeffs: &[ExactRational]) -> bool {
    clean_sum(coeffs).is_zero()
}

/// `F_n = sum_k a_k L^k P_{n-k}`.
#[allow(non_snake_case)]
pub fn build_Fn(coeffs: &[ExactRational], depth: usize) -> Result<DiffRingElement> {
    let n = coeffs.len();
    if n > depth {
        return Err(Error::DepthExceeded { n, depth });
    }
    let l = DiffRingElement::log(depth);
    let mut out = DiffRingElement::zero(depth);
    for (k, a) in coeffs.iter().enumerate() {
        let term = l.pow(k as u32).mul(&DiffRingElement::li(depth, n - k)?);
        out = out.add(&term.scale_rational(a));
    }
    Ok(out)
}

/// Whether `D F_n = lambda (1-z) F_{n-1} + mu L D F_{n-1}` in the free ring.
pub fn linked(
    current: &[ExactRational],
    previous: &[ExactRational],
    lambda: &ExactRational,
    mu: &ExactRational,
    depth: usize,
) -> Result<bool> {
    let f = build_Fn(current, depth)?;
    let g = build_Fn(previous, depth)?;
    let lhs = f.big_d();
    let rhs = g
        .scale(&rf("1-z"))
        .scale_rational(lambda)
        .add(&DiffRingElement::log(depth).mul(&g.big_d()).scale_rational(mu));
    Ok(lhs == rhs)
}

/// `(n-1) D F_n = (1-z) F_{n-1} - L D F_{n-1}` for the Besser coefficients.
pub fn verify_recursion(n: usize) -> Result<bool> {
    verify_recursion_with(&besser_coefficients(n), &besser_coefficients(n - 1), DEFAULT_DEPTH)
}

pub fn verify_recursion_with(current: &[ExactRational], previous: &[ExactRational], depth: usize) -> Result<bool> {
    let n = current.len();
    if n < 3 || previous.len() + 1 != n {
        return Err(Error::BadParams(format!("recursion needs n >= 3, got {n}")));
    }
    let inv = ExactRational::one() / rat(n as i64 - 1);
    linked(current, previous, &inv, &-inv.clone(), depth)
}

/// With `Phi_n = (n-1)! F_n`: `D Phi_n = D(L) Phi_{n-1} - L D Phi_{n-1}`.
pub fn verify_reformulated(n: usize) -> Result<bool> {
    let depth = DEFAULT_DEPTH.max(n);
    let phi = |m: usize| -> Result<DiffRingElement> {
        Ok(build_Fn(&besser_coefficients(m), depth)?.scale_rational(&factorial(m - 1)))
    };
    let (cur, prev) = (phi(n)?, phi(n - 1)?);
    let l = DiffRingElement::log(depth);
    let rhs = l.big_d().mul(&prev).sub(&l.mul(&prev.big_d()));
    Ok(cur.big_d() == rhs)
}

fn ser_rationals<S: Serializer>(v: &[ExactRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn ser_opt_rational<S: Serializer>(v: &Option<ExactRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// One level of a clean family.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyLevel {
    pub n: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub coefficients: Vec<ExactRational>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub lambda: Option<ExactRational>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub mu: Option<ExactRational>,
    /// The affine condition on `(lambda_n, mu_n)` imposed by cleanness.
    pub constraint: Option<String>,
    pub clean: bool,
    /// The level is linked to the previous one with `(lambda_n, mu_n)`,
    /// checked in the differential ring.
    pub linked: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CleanFamily {
    pub levels: Vec<FamilyLevel>,
}

/// Coefficients of `F_n` obtained by integrating the candidate
/// `lambda (1-z) F_{n-1} + mu L D F_{n-1}` from `a_0 = -n`.
fn integrate(prev: &[ExactRational], lambda: &ExactRational, mu: &ExactRational) -> Vec<ExactRational> {
    let n = prev.len() + 1;
    let mut a = vec![rat(-(n as i64))];
    for j in 0..n - 1 {
        let before = if j == 0 {
            ExactRational::zero()
        } else {
            prev[j - 1].clone()
        };
        let b = lambda * &prev[j] + mu * (before + rat(j as i64) * &prev[j]);
        let next = (b - &a[j]) / rat(j as i64 + 1);
        a.push(next);
    }
    a
}

fn constraint_text(n: usize, alpha: &ExactRational, beta: &ExactRational, gamma: &ExactRational) -> String {
    if alpha.is_zero() {
        return format!("{beta}*mu{n} = {gamma}");
    }
    let b = beta / alpha;
    let g = gamma / alpha;
    let mu_part = if b.is_one() {
        format!("+ mu{n}")
    } else if (-b.clone()).is_one() {
        format!("- mu{n}")
    } else if b < ExactRational::zero() {
        format!("- {}*mu{n}", -b)
    } else {
        format!("+ {b}*mu{n}")
    };
    format!("lambda{n} {mu_part} = {g}")
}

/// Build a clean family up to `n_max`. Level 2 is `-2 P_2 + L P_1`; at level
/// `n` the choice of `lambda_n` (default `1/(n-1)`) determines `mu_n` via
/// the cleanness condition, which is affine in `(lambda_n, mu_n)`.
pub fn construct_family(n_max: usize, lambdas: &BTreeMap<usize, ExactRational>, depth: usize) -> Result<CleanFamily> {
    if n_max > depth {
        return Err(Error::DepthExceeded { n: n_max, depth });
    }
    let first = vec![rat(-2), rat(1)];
    let mut levels = vec![FamilyLevel {
        n: 2,
        clean: clean_check(&first),
        coefficients: first,
        lambda: None,
        mu: None,
        constraint: None,
        linked: true,
    }];
    for n in 3..=n_max {
        let prev = levels.last().expect("level 2").coefficients.clone();
        let at = |l: i64, m: i64| clean_sum(&integrate(&prev, &rat(l), &rat(m)));
        let g0 = at(0, 0);
        let alpha = at(1, 0) - &g0;
        let beta = at(0, 1) - &g0;
        let gamma = -g0;
        let text = constraint_text(n, &alpha, &beta, &gamma);
        let lambda = lambdas
            .get(&n)
            .cloned()
            .unwrap_or_else(|| ExactRational::one() / rat(n as i64 - 1));
        if beta.is_zero() {
            return Err(Error::SingularChoice {
                level: n,
                reason: format!("cleanness reads {text}, which does not determine mu{n}"),
            });
        }
        let mu = (&gamma - &alpha * &lambda) / &beta;
        let coefficients = integrate(&prev, &lambda, &mu);
        let is_linked = linked(&coefficients, &prev, &lambda, &mu, depth)?;
        levels.push(FamilyLevel {
            n,
            clean: clean_check(&coefficients),
            coefficients,
            lambda: Some(lambda),
            mu: Some(mu),
            constraint: Some(text),
            linked: is_linked,
        });
    }
    Ok(CleanFamily { levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> ExactRational {
        ExactRational::new(a.into(), b.into())
    }

    #[test]
    fn big_d_examples() {
        let d = DEFAULT_DEPTH;
        let l = DiffRingElement::log(d);
        let p1 = DiffRingElement::li(d, 1).unwrap();
        let p2 = DiffRingElement::li(d, 2).unwrap();
        assert_eq!(p2.big_d(), p1.scale(&rf("1-z")));
        assert_eq!(l.big_d(), DiffRingElement::constant(d, rf("1-z")));
        let expected = p1.scale(&rf("1-z")).add(&l.scale(&rf("z")));
        assert_eq!(l.mul(&p1).big_d(), expected);
    }

    #[test]
    fn besser_small() {
        assert_eq!(besser_coefficients(2), vec![q(-2, 1), q(1, 1)]);
        assert_eq!(besser_coefficients(3), vec![q(-3, 1), q(2, 1), q(-1, 2)]);
        assert!(!clean_check(&[q(1, 1), q(0, 1), q(0, 1)]));
        assert_eq!(clean_sum(&[q(1, 1), q(0, 1), q(0, 1)]), q(1, 6));
    }

    #[test]
    fn level_four_constraint() {
        let mut choice = BTreeMap::new();
        choice.insert(3, q(3, 1));
        let fam = construct_family(4, &choice, DEFAULT_DEPTH).unwrap();
        assert_eq!(fam.levels[1].constraint.as_deref(), Some("lambda3 - mu3 = 1"));
        assert_eq!(fam.levels[2].constraint.as_deref(), Some("lambda4 - mu4 = -1"));
        choice.insert(3, q(2, 1));
        assert!(matches!(
            construct_family(4, &choice, DEFAULT_DEPTH),
            Err(Error::SingularChoice { level: 4, .. })
        ));
    }

    #[test]
    fn depth_is_enforced() {
        assert!(matches!(
            build_Fn(&besser_coefficients(13), 12),
            Err(Error::DepthExceeded { .. })
        ));
    }
}
