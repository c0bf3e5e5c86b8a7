//! The 2-cocycle `phi(x, y) = (x + y) H(x / (x + y))` on `F_p` built from
//! `H = L~_1`, the extension group it defines, and entropy mod `p`.

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{reduce_rational, ExactRational, FieldDescriptor, FieldElement};
use crate::finlog::FinitePolylog;
use crate::linalg::{dot, inv_mod, left_mul, solve, Matrix, Solution};

/// Default cap on exhaustive triple enumerations.
pub const DEFAULT_TRIPLE_BUDGET: u64 = 50_000_000;

/// `H(x) = sum_{k=1}^{p-1} x^k / k`.
pub fn h(x: &FieldElement, field: &FieldDescriptor) -> Result<FieldElement> {
    Ok(FinitePolylog::over(1, field)?.eval(x))
}

/// Value tables over `F_p`, with elements as residues.
#[derive(Clone, Debug)]
pub struct Tables {
    pub p: u32,
    pub h: Vec<u32>,
    pub inv: Vec<u32>,
}

impl Tables {
    pub fn new(p: u32) -> Result<Self> {
        let field = FieldDescriptor::prime(p)?;
        let h = FinitePolylog::over(1, &field)?
            .value_table()
            .iter()
            .map(|v| v.residue())
            .collect();
        let inv = (0..p).map(|x| if x == 0 { 0 } else { inv_mod(x, p) }).collect();
        Ok(Tables { p, h, inv })
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn phi(&self, x: u32, y: u32) -> u32 {
        let s = self.add(x, y);
        if s == 0 {
            0
        } else {
            self.mul(s, self.h[self.mul(x, self.inv[s as usize]) as usize])
        }
    }
}

pub fn phi(x: &FieldElement, y: &FieldElement, field: &FieldDescriptor) -> Result<FieldElement> {
    let s = field.add(x, y);
    if field.is_zero(&s) {
        return Ok(field.zero());
    }
    let t = field.mul(x, &field.inv(&s)?);
    Ok(field.mul(&s, &h(&t, field)?))
}

/// Outcome of an exhaustive property check, with the first failure.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub holds: bool,
    pub cases: u64,
    pub witness: Option<Vec<u32>>,
}

fn exhaustive<F>(total: u64, budget: u64, what: &str, fails: F) -> Result<Check>
where
    F: Fn(u64) -> Option<Vec<u32>> + Sync,
{
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: what.into(),
            needed: total as u128,
            budget: budget as u128,
        });
    }
    let witness = (0..total)
        .into_par_iter()
        .find_first(|&i| fails(i).is_some())
        .and_then(&fails);
    Ok(Check {
        holds: witness.is_none(),
        cases: total,
        witness,
    })
}

/// The cocycle condition, symmetry and degree-1 homogeneity of a function
/// on `F_p x F_p`.
#[derive(Clone, Debug, Serialize)]
pub struct CocycleVerdict {
    pub p: u32,
    pub cocycle: Check,
    pub symmetric: Check,
    pub homogeneous: Check,
}

impl CocycleVerdict {
    pub fn holds(&self) -> bool {
        self.cocycle.holds && self.symmetric.holds && self.homogeneous.holds
    }
}

pub fn check_cocycle(p: u32) -> Result<CocycleVerdict> {
    let t = Tables::new(p)?;
    check_cocycle_with(p, |x, y| t.phi(x, y), DEFAULT_TRIPLE_BUDGET)
}

/// `f(x,y) - f(x,y+z) + f(x+y,z) - f(y,z) = 0` over all triples, plus
/// `f(x,y) = f(y,x)` and `f(lx, ly) = l f(x,y)`.
pub fn check_cocycle_with<F>(p: u32, f: F, budget: u64) -> Result<CocycleVerdict>
where
    F: Fn(u32, u32) -> u32 + Sync,
{
    let t = Tables::new(p)?;
    let pp = p as u64;
    let cocycle = exhaustive(pp * pp * pp, budget, "cocycle triples", |i| {
        let (x, y, z) = ((i / (pp * pp)) as u32, (i / pp % pp) as u32, (i % pp) as u32);
        let lhs = t.add(t.sub(f(x, y), f(x, t.add(y, z))), t.sub(f(t.add(x, y), z), f(y, z)));
        (lhs != 0).then(|| vec![x, y, z])
    })?;
    let symmetric = exhaustive(pp * pp, budget, "pairs", |i| {
        let (x, y) = ((i / pp) as u32, (i % pp) as u32);
        (f(x, y) != f(y, x)).then(|| vec![x, y])
    })?;
    let homogeneous = exhaustive(pp * pp * (pp - 1), budget, "scaled pairs", |i| {
        let l = (i / (pp * pp)) as u32 + 1;
        let (x, y) = ((i / pp % pp) as u32, (i % pp) as u32);
        (f(t.mul(l, x), t.mul(l, y)) != t.mul(l, f(x, y))).then(|| vec![l, x, y])
    })?;
    Ok(CocycleVerdict {
        p,
        cocycle,
        symmetric,
        homogeneous,
    })
}

/// Either `psi` with `f(x,y) = psi(x) + psi(y) - psi(x+y)`, or a row
/// combination of those equations that reads `0 = nonzero`.
#[derive(Clone, Debug, Serialize)]
pub struct CoboundaryReport {
    pub p: u32,
    pub equations: usize,
    pub unknowns: usize,
    pub is_coboundary: bool,
    pub psi: Option<Vec<u32>>,
    /// `(x, y, multiplier)` for every equation used by the certificate.
    pub certificate: Option<Vec<(u32, u32, u32)>>,
    /// The certificate was re-checked: it kills every column and not the
    /// right-hand side.
    pub certificate_valid: Option<bool>,
}

pub fn coboundary_solve(p: u32) -> Result<CoboundaryReport> {
    let t = Tables::new(p)?;
    coboundary_solve_with(p, |x, y| t.phi(x, y))
}

pub fn coboundary_solve_with<F>(p: u32, f: F) -> Result<CoboundaryReport>
where
    F: Fn(u32, u32) -> u32,
{
    let t = Tables::new(p)?;
    let n = p as usize;
    let mut a = Matrix::new(p, n);
    let mut b = Vec::with_capacity(n * n);
    for x in 0..p {
        for y in 0..p {
            let mut row = vec![0u32; n];
            row[x as usize] += 1;
            row[y as usize] += 1;
            let s = t.add(x, y) as usize;
            row[s] = t.sub(row[s] % p, 1);
            a.push_row(row);
            b.push(f(x, y));
        }
    }
    let base = CoboundaryReport {
        p,
        equations: a.nrows(),
        unknowns: n,
        is_coboundary: false,
        psi: None,
        certificate: None,
        certificate_valid: None,
    };
    Ok(match solve(&a, &b) {
        Solution::Solved(psi) => CoboundaryReport {
            is_coboundary: true,
            psi: Some(psi),
            ..base
        },
        Solution::Inconsistent(y) => {
            let valid = left_mul(&y, &a).iter().all(|&v| v == 0) && dot(&y, &b, p) != 0;
            let cert = y
                .iter()
                .enumerate()
                .filter(|(_, &m)| m != 0)
                .map(|(i, &m)| ((i / n) as u32, (i % n) as u32, m))
                .collect();
            CoboundaryReport {
                certificate: Some(cert),
                certificate_valid: Some(valid),
                ..base
            }
        }
    })
}

/// `(u, b, a)` with `a != 0`: the central extension of `Aff(1, F_p)` by `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupElement {
    pub u: u32,
    pub b: u32,
    pub a: u32,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { u: 0, b: 0, a: 1 }
    }

    /// Element number `i` of `F_p x F_p x F_p^*`.
    pub fn from_index(p: u32, i: u64) -> Self {
        let pp = p as u64;
        GroupElement {
            u: (i / (pp * (pp - 1))) as u32,
            b: (i / (pp - 1) % pp) as u32,
            a: (i % (pp - 1)) as u32 + 1,
        }
    }
}

/// `(u1,b1,a1)(u2,b2,a2) = (u1 + a1 u2 + f(b1, a1 b2), b1 + a1 b2, a1 a2)`.
pub fn group_mul_with<F>(t: &Tables, f: &F, g1: GroupElement, g2: GroupElement) -> GroupElement
where
    F: Fn(u32, u32) -> u32,
{
    let ab2 = t.mul(g1.a, g2.b);
    GroupElement {
        u: t.add(t.add(g1.u, t.mul(g1.a, g2.u)), f(g1.b, ab2)),
        b: t.add(g1.b, ab2),
        a: t.mul(g1.a, g2.a),
    }
}

pub fn group_mul(t: &Tables, g1: GroupElement, g2: GroupElement) -> GroupElement {
    group_mul_with(t, &|x, y| t.phi(x, y), g1, g2)
}

pub fn group_inverse(t: &Tables, g: GroupElement) -> GroupElement {
    let ia = t.inv[g.a as usize];
    GroupElement {
        u: t.sub(0, t.mul(g.u, ia)),
        b: t.sub(0, t.mul(g.b, ia)),
        a: ia,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupVerdict {
    pub p: u32,
    pub order: u64,
    pub exhaustive: bool,
    pub associativity: Check,
    pub identity: Check,
    pub inverses: Check,
}

impl GroupVerdict {
    pub fn holds(&self) -> bool {
        self.associativity.holds && self.identity.holds && self.inverses.holds
    }
}

/// How [`group_check`] covers the triples.
#[derive(Clone, Copy, Debug)]
pub struct GroupCheckOptions {
    /// Enumerate every triple when there are at most this many.
    pub exhaustive_limit: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for GroupCheckOptions {
    fn default() -> Self {
        GroupCheckOptions {
            exhaustive_limit: 30_000_000,
            samples: 1_000_000,
            seed: 0,
        }
    }
}

pub fn group_check(p: u32, opts: &GroupCheckOptions) -> Result<GroupVerdict> {
    let t = Tables::new(p)?;
    group_check_with(p, |x, y| t.phi(x, y), opts)
}

pub fn group_check_with<F>(p: u32, f: F, opts: &GroupCheckOptions) -> Result<GroupVerdict>
where
    F: Fn(u32, u32) -> u32 + Sync,
{
    let t = Tables::new(p)?;
    let pp = p as u64;
    let order = pp * pp * (pp - 1);
    let el = |i: u64| GroupElement::from_index(p, i);
    let mul = |g: GroupElement, h: GroupElement| group_mul_with(&t, &f, g, h);
    let flat = |g: GroupElement| vec![g.u, g.b, g.a];
    let assoc_fails = |x: GroupElement, y: GroupElement, z: GroupElement| {
        (mul(mul(x, y), z) != mul(x, mul(y, z))).then(|| [flat(x), flat(y), flat(z)].concat())
    };
    let triples = order * order * order;
    let exhaustive_run = triples <= opts.exhaustive_limit;
    let associativity = if exhaustive_run {
        exhaustive(triples, u64::MAX, "group triples", |i| {
            assoc_fails(el(i / (order * order)), el(i / order % order), el(i % order))
        })?
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let picks: Vec<[u64; 3]> = (0..opts.samples)
            .map(|_| {
                [
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                ]
            })
            .collect();
        let witness = picks
            .par_iter()
            .find_first(|s| assoc_fails(el(s[0]), el(s[1]), el(s[2])).is_some())
            .and_then(|s| assoc_fails(el(s[0]), el(s[1]), el(s[2])));
        Check {
            holds: witness.is_none(),
            cases: opts.samples,
            witness,
        }
    };
    let e = GroupElement::identity();
    let identity = exhaustive(order, u64::MAX, "elements", |i| {
        let g = el(i);
        (mul(g, e) != g || mul(e, g) != g).then(|| flat(g))
    })?;
    let inverses = exhaustive(order, u64::MAX, "elements", |i| {
        let g = el(i);
        let gi = group_inverse(&t, g);
        (mul(g, gi) != e || mul(gi, g) != e).then(|| flat(g))
    })?;
    Ok(GroupVerdict {
        p,
        order,
        exhaustive: exhaustive_run,
        associativity,
        identity,
        inverses,
    })
}

/// `H(x+y) = H(y) + (1-y) H(x/(1-y)) + y H(-x/y)` for all `x` and
/// `y` outside `{0, 1}`.
pub fn check_equation_b(p: u32) -> Result<Check> {
    let t = Tables::new(p)?;
    let pp = p as u64;
    exhaustive(pp * pp, u64::MAX, "pairs", |i| {
        let (x, y) = ((i / pp) as u32, (i % pp) as u32);
        if y == 0 || y == 1 {
            return None;
        }
        let omy = t.sub(1, y);
        let rhs = t.add(
            t.add(t.h[y as usize], t.mul(omy, t.h[t.mul(x, t.inv[omy as usize]) as usize])),
            t.mul(y, t.h[t.sub(0, t.mul(x, t.inv[y as usize])) as usize]),
        );
        (t.h[t.add(x, y) as usize] != rhs).then(|| vec![x, y])
    })
}

/// `x H(1/x) = -H(x)` for `x != 0`.
pub fn check_equation_c(p: u32) -> Result<Check> {
    let t = Tables::new(p)?;
    exhaustive(p as u64 - 1, u64::MAX, "points", |i| {
        let x = i as u32 + 1;
        (t.mul(x, t.h[t.inv[x as usize] as usize]) != t.sub(0, t.h[x as usize])).then(|| vec![x])
    })
}

/// Finitely many outcomes with rational probabilities summing to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalDistribution {
    probs: Vec<ExactRational>,
}

impl RationalDistribution {
    pub fn new(probs: Vec<ExactRational>) -> Result<Self> {
        if probs.iter().any(|q| *q < ExactRational::zero()) {
            return Err(Error::BadParams("negative probability".into()));
        }
        let total = probs.iter().fold(ExactRational::zero(), |acc, q| acc + q);
        if !total.is_one() {
            return Err(Error::BadParams(format!("probabilities sum to {total}, not 1")));
        }
        Ok(RationalDistribution { probs })
    }

    /// Parse `"1/4,1/4,1/2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let probs = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<ExactRational>()
                    .map_err(|_| Error::BadParams(format!("not a rational: '{s}'")))
            })
            .collect::<Result<_>>()?;
        Self::new(probs)
    }

    pub fn probs(&self) -> &[ExactRational] {
        &self.probs
    }

    fn reduce(&self, field: &FieldDescriptor) -> Result<Vec<u32>> {
        self.probs
            .iter()
            .filter(|q| !q.is_zero())
            .map(|q| {
                reduce_rational(q, field).map(|e| e.residue()).ok_or_else(|| {
                    Error::BadParams(format!("{q} has p = {} in its denominator", field.characteristic()))
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyValue {
    pub p: u32,
    pub value: u32,
    /// Positions of the nonzero outcomes in the order used.
    pub ordering: Vec<usize>,
    pub orderings_tried: u64,
}

/// Default cap on orderings tried by [`entropy_mod_p`].
pub const DEFAULT_PERMUTATION_BUDGET: u64 = 40_320;

/// `H(x_1, ..., x_k) = H(x_1) + (1 - x_1) H(x_2/(1-x_1), ..., x_k/(1-x_1))`
/// in `F_p`, or `None` when some `1 - x_1` vanishes before the tail is a
/// single outcome.
fn entropy_in_order(t: &Tables, xs: &[u32]) -> Option<u32> {
    if xs.len() <= 1 {
        return Some(0);
    }
    let rest = t.sub(1, xs[0]);
    let head = t.h[xs[0] as usize];
    if xs.len() == 2 {
        return Some(head);
    }
    if rest == 0 {
        return None;
    }
    let r = t.inv[rest as usize];
    let tail: Vec<u32> = xs[1..].iter().map(|&x| t.mul(x, r)).collect();
    Some(t.add(head, t.mul(rest, entropy_in_order(t, &tail)?)))
}

/// Next permutation in lexicographic order, in place.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn entropy_mod_p(d: &RationalDistribution, p: u32) -> Result<EntropyValue> {
    entropy_mod_p_with(d, p, DEFAULT_PERMUTATION_BUDGET)
}

/// Entropy of `d` reduced mod `p`: the given order first, then the other
/// orderings lexicographically, until one avoids a division by zero.
/// Zero probabilities are dropped first.
pub fn entropy_mod_p_with(d: &RationalDistribution, p: u32, budget: u64) -> Result<EntropyValue> {
    let field = FieldDescriptor::prime(p)?;
    let t = Tables::new(p)?;
    let xs = d.reduce(&field)?;
    let positions: Vec<usize> = d
        .probs
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(i, _)| i)
        .collect();
    let mut perm: Vec<usize> = (0..xs.len()).collect();
    let mut tried = 0u64;
    loop {
        if tried >= budget {
            break;
        }
        tried += 1;
        let ordered: Vec<u32> = perm.iter().map(|&i| xs[i]).collect();
        if let Some(value) = entropy_in_order(&t, &ordered) {
            return Ok(EntropyValue {
                p,
                value,
                ordering: perm.iter().map(|&i| positions[i]).collect(),
                orderings_tried: tried,
            });
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Err(Error::NoAdmissibleOrdering(p))
}

/// Values of the recursion under every admissible ordering.
pub fn entropy_all_orderings(d: &RationalDistribution, p: u32) -> Result<Vec<u32>> {
    let field = FieldDescriptor::prime(p)?;
    let t = Tables::new(p)?;
    let xs = d.reduce(&field)?;
    let mut perm: Vec<usize> = (0..xs.len()).collect();
    let mut out = Vec::new();
    loop {
        let ordered: Vec<u32> = perm.iter().map(|&i| xs[i]).collect();
        out.extend(entropy_in_order(&t, &ordered));
        if !next_permutation(&mut perm) {
            return Ok(out);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityVerdict {
    pub p: u32,
    pub holds: bool,
    pub joint: u32,
    pub coarse: u32,
    pub relative: u32,
}

/// `H(joint) = H(coarse) + sum_i q_i H(group_i / q_i)` where the joint
/// distribution lists the groups one after another and `q_i` is the total
/// of group `i`.
pub fn main_identity_check(groups: &[Vec<ExactRational>], p: u32) -> Result<IdentityVerdict> {
    let field = FieldDescriptor::prime(p)?;
    let t = Tables::new(p)?;
    let joint = RationalDistribution::new(groups.concat())?;
    let totals: Vec<ExactRational> = groups
        .iter()
        .map(|g| g.iter().fold(ExactRational::zero(), |acc, q| acc + q))
        .collect();
    let coarse = RationalDistribution::new(totals.clone())?;
    let mut relative = 0u32;
    for (g, q) in groups.iter().zip(&totals) {
        if q.is_zero() {
            continue;
        }
        let qi = reduce_rational(q, &field)
            .map(|e| e.residue())
            .filter(|&r| r != 0)
            .ok_or_else(|| Error::BadParams(format!("group total {q} is not a unit mod {p}")))?;
        let cond = RationalDistribution::new(g.iter().map(|x| x / q).collect())?;
        relative = t.add(relative, t.mul(qi, entropy_mod_p(&cond, p)?.value));
    }
    let joint_v = entropy_mod_p(&joint, p)?.value;
    let coarse_v = entropy_mod_p(&coarse, p)?.value;
    Ok(IdentityVerdict {
        p,
        holds: joint_v == t.add(coarse_v, relative),
        joint: joint_v,
        coarse: coarse_v,
        relative,
    })
}

/// A random distribution with `k` outcomes whose denominators are prime to
/// `p` (test and benchmark input).
pub fn random_distribution(rng: &mut impl Rng, k: usize, p: u32) -> RationalDistribution {
    loop {
        let den: i64 = loop {
            let d = rng.gen_range(1..=60i64);
            if d % p as i64 != 0 {
                break d;
            }
        };
        let mut cuts: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(0..=den)).collect();
        cuts.sort_unstable();
        let mut probs = Vec::with_capacity(k);
        let mut prev = 0;
        for c in cuts.into_iter().chain(std::iter::once(den)) {
            probs.push(ExactRational::new((c - prev).into(), den.into()));
            prev = c;
        }
        if probs
            .iter()
            .all(|q| q.denom().mod_floor(&(p as i64).into()) != Zero::zero())
        {
            return RationalDistribution::new(probs).expect("sums to 1");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> ExactRational {
        ExactRational::new(a.into(), b.into())
    }

    #[test]
    fn small_values() {
        let f = FieldDescriptor::prime(5).unwrap();
        assert_eq!(h(&f.from_u32(3), &f).unwrap(), f.from_u32(3));
        assert_eq!(h(&f.one(), &f).unwrap(), f.zero());
        assert_eq!(phi(&f.one(), &f.one(), &f).unwrap(), f.one());
        assert_eq!(phi(&f.one(), &f.from_int(-1), &f).unwrap(), f.zero());
    }

    #[test]
    fn entropy_examples() {
        let half = RationalDistribution::parse("1/2,1/2").unwrap();
        assert_eq!(entropy_mod_p(&half, 5).unwrap().value, 3);
        assert_eq!(
            entropy_mod_p(&RationalDistribution::parse("1").unwrap(), 5)
                .unwrap()
                .value,
            0
        );
        let quarters = RationalDistribution::parse("1/4,1/4,1/4,1/4").unwrap();
        let all = entropy_all_orderings(&quarters, 7).unwrap();
        assert!(all.len() > 1 && all.iter().all(|&v| v == all[0]));
        assert!(RationalDistribution::parse("1/2,1/3").is_err());
    }

    #[test]
    fn identity_example() {
        let v = main_identity_check(&[vec![q(1, 4), q(1, 4)], vec![q(1, 2)]], 7).unwrap();
        assert!(v.holds);
        let v = main_identity_check(&[vec![q(1, 3)], vec![q(2, 3)]], 7).unwrap();
        assert!(v.holds && v.relative == 0);
    }

    #[test]
    fn group_identity_law() {
        let t = Tables::new(5).unwrap();
        let g = GroupElement { u: 2, b: 3, a: 4 };
        assert_eq!(group_mul(&t, g, GroupElement::identity()), g);
    }
}
