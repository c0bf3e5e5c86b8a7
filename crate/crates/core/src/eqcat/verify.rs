use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::fasteval::{CompiledSum, LogField, MAX_TABLE_ORDER};
use super::formal_sum::{Convention, FormalSum};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::finlog::{lhat_apply, FinitePolylog};
use crate::poly::{PolyRing, RatFunc};
use crate::ring::CoeffRing;

/// Default number of points a weak check may evaluate.
pub const DEFAULT_POINT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strong,
    Weak,
}

/// Outcome of a strong or weak check.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub mode: Mode,
    #[serde(skip)]
    pub residual: Option<RatFunc<FieldDescriptor>>,
    /// Text of a nonzero residual (strong mode).
    pub residual_text: Option<String>,
    #[serde(skip)]
    pub counterexample: Option<Vec<FieldElement>>,
    /// `var=value` pairs of the first failing point (weak mode).
    pub counterexample_text: Option<Vec<String>>,
    pub points_checked: u64,
    pub points_skipped: u64,
    /// Set when the point space exceeded the budget and was sampled.
    pub sampled: bool,
    pub space_size: u128,
}

/// Knobs for [`verify_weak_with`].
#[derive(Clone, Copy, Debug)]
pub struct WeakOptions {
    pub budget: u64,
    pub allow_sampling: bool,
    pub seed: u64,
}

impl Default for WeakOptions {
    fn default() -> Self {
        WeakOptions {
            budget: DEFAULT_POINT_BUDGET,
            allow_sampling: true,
            seed: 0,
        }
    }
}

/// `L^_m(S)` as a polynomial identity.
pub fn verify_strong(sum: &FormalSum<FieldDescriptor>, m: i64) -> Result<Verdict> {
    if sum.convention() == Convention::Classical {
        return Err(Error::BadParams(format!(
            "{} is a classical relation; derive it first",
            sum.id()
        )));
    }
    let residual = lhat_apply(m, sum)?;
    let holds = residual.is_zero();
    Ok(Verdict {
        holds,
        mode: Mode::Strong,
        residual_text: (!holds).then(|| residual.to_text()),
        residual: Some(residual),
        counterexample: None,
        counterexample_text: None,
        points_checked: 0,
        points_skipped: 0,
        sampled: false,
        space_size: 0,
    })
}

/// Point number `index` of `F_q^r` in mixed-radix order (first variable
/// most significant).
fn point_at(field: &FieldDescriptor, r: usize, mut index: u64) -> Vec<FieldElement> {
    let q = field.order();
    let mut pt = vec![field.zero(); r];
    for slot in pt.iter_mut().rev() {
        *slot = field.element(index % q);
        index /= q;
    }
    pt
}

/// Whether every coefficient and argument of `sum` is defined at `pt`.
pub fn is_admissible<R: CoeffRing>(sum: &FormalSum<R>, pt: &[R::Elem]) -> bool {
    sum.terms()
        .iter()
        .all(|t| t.coeff.evaluate(pt).is_ok() && t.arg.evaluate(pt).is_ok())
}

/// All admissible points of `F_q^r`, lazily, in enumeration order.
pub fn admissible_points<'a>(sum: &'a FormalSum<FieldDescriptor>) -> impl Iterator<Item = Vec<FieldElement>> + 'a {
    let field = sum.ring().coeffs().clone();
    let r = sum.ring().nvars();
    let total = field.order().pow(r as u32);
    (0..total)
        .map(move |i| point_at(&field, r, i))
        .filter(move |pt| is_admissible(sum, pt))
}

/// Number of admissible points, counted in parallel.
pub fn admissible_count(sum: &FormalSum<FieldDescriptor>) -> u64 {
    let field = sum.ring().coeffs();
    let r = sum.ring().nvars();
    let total = field.order().pow(r as u32);
    (0..total)
        .into_par_iter()
        .filter(|&i| is_admissible(sum, &point_at(field, r, i)))
        .count() as u64
}

pub fn verify_weak(sum: &FormalSum<FieldDescriptor>, m: i64) -> Result<Verdict> {
    verify_weak_with(sum, m, &WeakOptions::default())
}

/// Evaluate `L^_m(S)` at every admissible point of `F_q^r`, or at `budget`
/// seeded random points when the space is larger than the budget.
pub fn verify_weak_with(sum: &FormalSum<FieldDescriptor>, m: i64, opts: &WeakOptions) -> Result<Verdict> {
    let field = sum.ring().coeffs().clone();
    let r = sum.ring().nvars();
    let space = (field.order() as u128).pow(r as u32);
    let table = FinitePolylog::over(m, &field)?.value_table();
    let q = field.order();
    let fast = (q <= MAX_TABLE_ORDER).then(|| {
        let lf = LogField::new(&field);
        let cs = CompiledSum::new(sum, &lf, &table);
        (lf, cs)
    });
    let eval = |pt: &[FieldElement]| -> Option<bool> {
        if let Some((lf, cs)) = &fast {
            let logs: Vec<u32> = pt.iter().map(|x| lf.log(field.index_of(x))).collect();
            return cs.vanishes(lf, &logs, &mut Vec::new());
        }
        let mut acc = field.zero();
        for t in sum.terms() {
            let c = t.coeff.evaluate(pt).ok()?;
            let x = t.arg.evaluate(pt).ok()?;
            let l = table[field.index_of(&x) as usize];
            acc = field.add(&acc, &field.mul(&field.frobenius(&c), &l));
        }
        Some(field.is_zero(&acc))
    };
    // (checked, skipped, first failing index)
    type Acc = (u64, u64, Option<u64>);
    let fold = |mut acc: Acc, (i, pt): (u64, Vec<FieldElement>)| -> Acc {
        match eval(&pt) {
            None => acc.1 += 1,
            Some(true) => acc.0 += 1,
            Some(false) => {
                acc.0 += 1;
                acc.2 = Some(acc.2.map_or(i, |j| j.min(i)));
            }
        }
        acc
    };
    let merge = |a: Acc, b: Acc| -> Acc {
        let first = match (a.2, b.2) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        (a.0 + b.0, a.1 + b.1, first)
    };
    let sampled = space > opts.budget as u128;
    let (checked, skipped, fail_point) = if !sampled {
        let total = space as u64;
        let (c, s, f) = (0..total)
            .into_par_iter()
            .map(|i| (i, point_at(&field, r, i)))
            .fold(|| (0, 0, None), fold)
            .reduce(|| (0, 0, None), merge);
        (c, s, f.map(|i| point_at(&field, r, i)))
    } else {
        if !opts.allow_sampling {
            return Err(Error::BudgetExceeded {
                what: "weak check points".into(),
                needed: space,
                budget: opts.budget as u128,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let q = field.order();
        let points: Vec<Vec<FieldElement>> = (0..opts.budget)
            .map(|_| (0..r).map(|_| field.element(rng.gen_range(0..q))).collect())
            .collect();
        let (c, s, f) = points
            .par_iter()
            .enumerate()
            .map(|(i, pt)| (i as u64, pt.clone()))
            .fold(|| (0, 0, None), fold)
            .reduce(|| (0, 0, None), merge);
        (c, s, f.map(|i| points[i as usize].clone()))
    };
    let text = fail_point.as_ref().map(|pt| {
        sum.variables()
            .iter()
            .zip(pt)
            .map(|(v, x)| format!("{v}={}", field.display(x)))
            .collect()
    });
    Ok(Verdict {
        holds: fail_point.is_none(),
        mode: Mode::Weak,
        residual: None,
        residual_text: None,
        counterexample: fail_point,
        counterexample_text: text,
        points_checked: checked,
        points_skipped: skipped,
        sampled,
        space_size: space,
    })
}

/// Rewrite every term whose argument is not the canonical one of the pair
/// `{x, 1/x}` by `c[1/x] -> (-1)^m (c/x)[x]`, then merge like terms.
pub fn normalize_mod_inversion<R: CoeffRing>(sum: &FormalSum<R>, m: i64) -> FormalSum<R> {
    let mut out = sum.empty_like();
    let sign = RatFunc::from_int(sum.ring(), if m.rem_euclid(2) == 0 { 1 } else { -1 });
    for t in sum.terms() {
        if t.arg.as_constant().is_none() {
            if let Ok(x) = t.arg.inv() {
                if x.canonical_cmp(&t.arg) == Ordering::Less {
                    out.push(t.coeff.mul(&t.arg).mul(&sign), x);
                    continue;
                }
            }
        }
        out.push(t.coeff.clone(), t.arg.clone());
    }
    out.merged()
}

/// Re-express a sum over the prime field in an extension of it.
pub fn lift_to_extension(
    sum: &FormalSum<FieldDescriptor>,
    field: &FieldDescriptor,
) -> Result<FormalSum<FieldDescriptor>> {
    let base = sum.ring().coeffs();
    if !base.is_prime_field() || base.characteristic() != field.characteristic() {
        return Err(Error::DomainMismatch(format!(
            "cannot lift {} into {}",
            base.tag(),
            field.tag()
        )));
    }
    let ring = PolyRing::new(field.clone(), sum.variables())?;
    sum.map_coeffs(&ring, |c| Some(field.from_u32(c.residue())))
}
