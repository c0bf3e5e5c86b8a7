//! Transport of classical relations to infinitesimal ones:
//! `n [x] -> n D(x) / (x (1 - x)) [x]` for a derivation `D`.

use std::sync::Arc;

use serde::Serialize;

use crate::eqcat::{
    normalize_mod_inversion, verify_strong, verify_weak_with, Convention, FormalSum, Verdict, WeakOptions,
};
use crate::error::{Error, Result};
use crate::field::{reduce_rational, FieldDescriptor};
use crate::poly::{parse_ratfunc, PolyRing, RatFunc};
use crate::ring::{CoeffRing, Rationals};

/// `D = sum_j g_j d/dt_j` on the rational functions of a ring.
#[derive(Clone, Debug)]
pub struct Derivation<R: CoeffRing> {
    ring: Arc<PolyRing<R>>,
    coeffs: Vec<RatFunc<R>>,
}

impl<R: CoeffRing> Derivation<R> {
    pub fn zero(ring: &Arc<PolyRing<R>>) -> Self {
        Derivation {
            ring: ring.clone(),
            coeffs: (0..ring.nvars()).map(|_| RatFunc::zero(ring)).collect(),
        }
    }

    /// `sum_t t (1 - t) d/dt` over every variable.
    pub fn standard(ring: &Arc<PolyRing<R>>) -> Self {
        let one = RatFunc::one(ring);
        Derivation {
            ring: ring.clone(),
            coeffs: (0..ring.nvars())
                .map(|i| {
                    let t = RatFunc::var(ring, i);
                    t.mul(&one.sub(&t))
                })
                .collect(),
        }
    }

    pub fn with(mut self, var: usize, g: RatFunc<R>) -> Self {
        self.coeffs[var] = g;
        self
    }

    /// Parse `"a:a*(1-a);b:b*(1-b)"`; unnamed variables get `0`.
    pub fn parse(ring: &Arc<PolyRing<R>>, text: &str) -> Result<Self> {
        let mut d = Self::zero(ring);
        for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (var, expr) = part
                .split_once(':')
                .ok_or_else(|| Error::BadParams(format!("expected var:expr, got '{part}'")))?;
            let i = ring
                .var_index(var.trim())
                .ok_or_else(|| Error::BadParams(format!("unknown variable '{}'", var.trim())))?;
            d.coeffs[i] = parse_ratfunc(ring, expr)?;
        }
        Ok(d)
    }

    pub fn ring(&self) -> &Arc<PolyRing<R>> {
        &self.ring
    }

    pub fn coefficient(&self, var: usize) -> &RatFunc<R> {
        &self.coeffs[var]
    }

    pub fn add(&self, other: &Self) -> Self {
        Derivation {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn apply(&self, f: &RatFunc<R>) -> RatFunc<R> {
        let parts = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_zero())
            .map(|(i, g)| g.mul(&f.derivative(i)))
            .collect();
        RatFunc::sum(&self.ring, parts)
    }
}

/// A derived sum together with the terms that were dropped on the way.
#[derive(Clone, Debug)]
pub struct Derived<R: CoeffRing> {
    pub sum: FormalSum<R>,
    pub notices: Vec<String>,
}

/// Apply the derivation map to a classical relation of weight `n`, giving
/// an infinitesimal relation of finite weight `n - 1`. Constant arguments
/// are dropped with a notice; a zero argument is rejected.
pub fn derive<R: CoeffRing>(sum: &FormalSum<R>, d: &Derivation<R>) -> Result<Derived<R>> {
    if sum.ring() != d.ring() {
        return Err(Error::DomainMismatch("derivation over another ring".into()));
    }
    let ring = sum.ring();
    let one = RatFunc::one(ring);
    let mut out = sum.empty_like();
    out.set_id(format!("derived:{}", sum.id()));
    out.set_weight(sum.weight() - 1, Convention::Infinitesimal);
    let mut notices = Vec::new();
    for t in sum.terms() {
        if let Some(c) = t.arg.as_constant() {
            if ring.coeffs().is_zero(c) {
                return Err(Error::DegenerateArgument(format!("argument 0 in {}", sum.id())));
            }
            notices.push(format!("dropped constant term ({})[{}]", t.coeff, t.arg));
            continue;
        }
        let x1mx = t.arg.mul(&one.sub(&t.arg));
        if x1mx.is_zero() {
            return Err(Error::DegenerateArgument(format!("{}", t.arg)));
        }
        let c = t.coeff.mul(&d.apply(&t.arg)).div(&x1mx)?;
        out.push(c, t.arg.clone());
    }
    Ok(Derived { sum: out, notices })
}

/// Result of comparing two infinitesimal sums modulo inversion.
#[derive(Clone, Debug, Serialize)]
pub struct Match {
    pub equal: bool,
    /// `lambda` with `S1 = lambda S2`, when the sums agree up to a scalar.
    pub scalar: Option<String>,
    pub chain: Vec<String>,
}

/// Whether `S1 - S2` (or `S1 - lambda S2` for a constant `lambda`) merges to
/// the empty sum after rewriting arguments to canonical representatives.
pub fn derived_equals<R: CoeffRing>(s1: &FormalSum<R>, s2: &FormalSum<R>, m: i64) -> Result<Match> {
    let mut chain = vec![format!("normalize both sides modulo inversion in weight {m}")];
    let a = normalize_mod_inversion(s1, m);
    let b = normalize_mod_inversion(s2, m);
    chain.push(format!("{} and {} canonical terms", a.len(), b.len()));
    let diff = normalize_mod_inversion(&a.minus(&b)?, m);
    if diff.is_empty() {
        chain.push("difference merges to 0".into());
        return Ok(Match {
            equal: true,
            scalar: Some("1".into()),
            chain,
        });
    }
    let lambda = b.terms().first().and_then(|t2| {
        let t1 = a.terms().iter().find(|t| t.arg == t2.arg)?;
        let l = t1.coeff.div(&t2.coeff).ok()?;
        l.as_constant().is_some().then_some(l)
    });
    if let Some(l) = lambda {
        let diff = normalize_mod_inversion(&a.minus(&b.scaled(&l))?, m);
        if diff.is_empty() {
            chain.push(format!("difference merges to 0 after scaling by {l}"));
            return Ok(Match {
                equal: true,
                scalar: Some(l.to_string()),
                chain,
            });
        }
    }
    chain.push(format!("{} terms remain", diff.len()));
    Ok(Match {
        equal: false,
        scalar: None,
        chain,
    })
}

/// Weak check of a derived sum over the field of its ring, with the strong
/// status attempted alongside.
#[derive(Clone, Debug, Serialize)]
pub struct DerivedVerdict {
    pub weak: Verdict,
    pub strong: Option<Verdict>,
    pub strong_error: Option<String>,
}

pub fn verify_derived(sum: &FormalSum<FieldDescriptor>, m: i64, opts: &WeakOptions) -> Result<DerivedVerdict> {
    let weak = verify_weak_with(sum, m, opts)?;
    let (strong, strong_error) = match verify_strong(sum, m) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(DerivedVerdict {
        weak,
        strong,
        strong_error,
    })
}

/// Reduce a sum with rational coefficients modulo `p`; fails if some
/// coefficient is not `p`-integral.
pub fn reduce_mod_p(sum: &FormalSum<Rationals>, field: &FieldDescriptor) -> Result<FormalSum<FieldDescriptor>> {
    let ring = PolyRing::new(field.clone(), sum.variables())?;
    sum.map_coeffs(&ring, |r| reduce_rational(r, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqcat::{build, Params};

    #[test]
    fn quotient_rule_example() {
        let ring = PolyRing::new(FieldDescriptor::prime(11).unwrap(), &["a", "b"]).unwrap();
        let d = Derivation::standard(&ring);
        let f = parse_ratfunc(&ring, "b/a").unwrap();
        assert_eq!(d.apply(&f), parse_ratfunc(&ring, "b*(a-b)/a").unwrap());
        assert!(d.apply(&RatFunc::from_int(&ring, 3)).is_zero());
    }

    #[test]
    fn five_term_gives_feit_exactly() {
        let f = FieldDescriptor::prime(11).unwrap();
        let five = build(&f, "five_term_classical", &Params::default()).unwrap();
        let d = Derivation::standard(five.ring());
        let derived = derive(&five, &d).unwrap();
        let feit = build(&f, "feit", &Params::default()).unwrap();
        let m = derived_equals(&derived.sum, &feit, 1).unwrap();
        assert!(m.equal, "{:?}", m.chain);
        let two = build(&f, "two_term", &Params::default()).unwrap();
        let other = derive(&five, &Derivation::zero(five.ring())).unwrap();
        assert!(other.sum.is_empty());
        assert_eq!(derived.sum.weight(), 1);
        assert!(two.len() == 2);
    }

    #[test]
    fn zero_argument_is_degenerate() {
        let f = FieldDescriptor::prime(5).unwrap();
        let ring = PolyRing::new(f, &["x"]).unwrap();
        let s = FormalSum::new("z", "", 2, Convention::Classical, &ring)
            .with_term(RatFunc::one(&ring), RatFunc::zero(&ring));
        assert!(matches!(
            derive(&s, &Derivation::standard(&ring)),
            Err(Error::DegenerateArgument(_))
        ));
    }
}
