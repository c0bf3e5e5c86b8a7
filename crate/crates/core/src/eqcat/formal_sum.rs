use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{PolyRing, RatFunc};
use crate::ring::CoeffRing;

/// Whether a sum is read with un-Frobeniized coefficients (checked through
/// `L^_m`) or as a classical integer-coefficient relation that only feeds the
/// derivation map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Infinitesimal,
    Classical,
}

/// One `coeff [arg]` summand.
#[derive(Clone, Debug, PartialEq)]
pub struct Term<R: CoeffRing> {
    pub coeff: RatFunc<R>,
    pub arg: RatFunc<R>,
}

/// A weighted list of `(coefficient, argument)` pairs over a ring of
/// rational functions. Infinitesimal sums carry the finite weight `m` they
/// are evaluated with; classical sums carry the classical weight `n`.
#[derive(Clone, Debug)]
pub struct FormalSum<R: CoeffRing> {
    id: String,
    source: String,
    weight: i64,
    convention: Convention,
    ring: Arc<PolyRing<R>>,
    terms: Vec<Term<R>>,
}

impl<R: CoeffRing> FormalSum<R> {
    pub fn new(
        id: impl Into<String>,
        source: impl Into<String>,
        weight: i64,
        convention: Convention,
        ring: &Arc<PolyRing<R>>,
    ) -> Self {
        FormalSum {
            id: id.into(),
            source: source.into(),
            weight,
            convention,
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    /// An empty sum with the same metadata.
    pub fn empty_like(&self) -> Self {
        FormalSum {
            terms: Vec::new(),
            ..self.clone()
        }
    }

    /// Append a term; zero coefficients are skipped.
    pub fn push(&mut self, coeff: RatFunc<R>, arg: RatFunc<R>) {
        assert!(
            Arc::ptr_eq(coeff.ring(), &self.ring) || coeff.ring() == &self.ring,
            "coefficient from a different ring"
        );
        if !coeff.is_zero() {
            self.terms.push(Term { coeff, arg });
        }
    }

    pub fn with_term(mut self, coeff: RatFunc<R>, arg: RatFunc<R>) -> Self {
        self.push(coeff, arg);
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn ring(&self) -> &Arc<PolyRing<R>> {
        &self.ring
    }

    pub fn variables(&self) -> &[String] {
        self.ring.vars()
    }

    pub fn terms(&self) -> &[Term<R>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    pub fn set_weight(&mut self, weight: i64, convention: Convention) {
        self.weight = weight;
        self.convention = convention;
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &RatFunc<R>> {
        self.terms.iter().map(|t| &t.coeff)
    }

    pub fn arguments(&self) -> impl Iterator<Item = &RatFunc<R>> {
        self.terms.iter().map(|t| &t.arg)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::DomainMismatch(format!(
                "{} vs {}",
                self.ring.tag(),
                other.ring.tag()
            )));
        }
        if self.weight != other.weight || self.convention != other.convention {
            return Err(Error::BadParams(format!(
                "weights differ: {} vs {}",
                self.weight, other.weight
            )));
        }
        Ok(())
    }

    /// Concatenation of the term lists (no merging).
    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        self.plus(&other.scaled(&RatFunc::from_int(&self.ring, -1)))
    }

    /// Multiply every coefficient by `c`.
    pub fn scaled(&self, c: &RatFunc<R>) -> Self {
        let mut out = self.empty_like();
        for t in &self.terms {
            out.push(t.coeff.mul(c), t.arg.clone());
        }
        out
    }

    /// Merge terms with equal arguments and drop vanishing coefficients.
    /// Arguments are compared as rational functions, so differently stored
    /// forms of the same function are merged.
    pub fn merged(&self) -> Self {
        let mut groups: Vec<(RatFunc<R>, Vec<RatFunc<R>>)> = Vec::new();
        for t in &self.terms {
            match groups.iter_mut().find(|(a, _)| *a == t.arg) {
                Some((_, cs)) => cs.push(t.coeff.clone()),
                None => groups.push((t.arg.clone(), vec![t.coeff.clone()])),
            }
        }
        let mut out = self.empty_like();
        for (arg, cs) in groups {
            out.push(RatFunc::sum(&self.ring, cs), arg);
        }
        out
    }

    /// Apply `x_i -> assign[i]` to every coefficient and argument.
    pub fn compose(&self, target: &Arc<PolyRing<R>>, assign: &[RatFunc<R>]) -> Result<Self> {
        let mut out = FormalSum {
            ring: target.clone(),
            terms: Vec::new(),
            ..self.clone()
        };
        for t in &self.terms {
            out.push(t.coeff.compose(target, assign)?, t.arg.compose(target, assign)?);
        }
        Ok(out)
    }

    /// Transport into another coefficient domain over the same variables.
    pub fn map_coeffs<S: CoeffRing>(
        &self,
        ring: &Arc<PolyRing<S>>,
        f: impl Fn(&R::Elem) -> Option<S::Elem> + Copy,
    ) -> Result<FormalSum<S>> {
        let mut out = FormalSum::new(self.id.clone(), self.source.clone(), self.weight, self.convention, ring);
        for t in &self.terms {
            let bad = || Error::DomainMismatch("coefficient has no image".into());
            let c = t.coeff.map_coeffs(ring, f)?.ok_or_else(bad)?;
            let a = t.arg.map_coeffs(ring, f)?.ok_or_else(bad)?;
            out.push(c, a);
        }
        Ok(out)
    }

    /// Deterministic text: header line then one `coeff [arg]` per line.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} weight {} ({:?}) over {}\n",
            self.id,
            self.weight,
            self.convention,
            self.ring.tag()
        );
        for t in &self.terms {
            s.push_str(&format!("  ({}) [{}]\n", t.coeff, t.arg));
        }
        s
    }
}

impl<R: CoeffRing> fmt::Display for FormalSum<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})[{}]", t.coeff, t.arg)?;
        }
        Ok(())
    }
}
