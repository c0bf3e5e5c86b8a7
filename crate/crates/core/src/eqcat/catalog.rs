use std::sync::Arc;

use serde::Serialize;

use super::formal_sum::{Convention, FormalSum};
use crate::error::{Error, Result};
use crate::poly::{parse_ratfunc, PolyRing, RatFunc};
use crate::ring::CoeffRing;

/// Optional knobs for parametrised entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    /// Weight for `inversion`, `distribution` and `distribution_classical`.
    pub weight: Option<i64>,
    /// Order `k` of the distribution relation (`k = 2` is duplication).
    pub order: Option<i64>,
    /// Which specialization of `J` (0: c=a, 1: c=b, 2: c=a/b,
    /// 3: c=(1-a)/(1-b)).
    pub spec: Option<usize>,
}

impl Params {
    pub fn weight(w: i64) -> Self {
        Params {
            weight: Some(w),
            ..Params::default()
        }
    }

    pub fn distribution(w: i64, k: i64) -> Self {
        Params {
            weight: Some(w),
            order: Some(k),
            spec: None,
        }
    }

    pub fn spec(i: usize) -> Self {
        Params {
            spec: Some(i),
            ..Params::default()
        }
    }
}

/// Registry record for one catalog id.
#[derive(Clone, Debug, Serialize)]
pub struct EntryInfo {
    pub id: &'static str,
    pub convention: Convention,
    /// Fixed weight, or `None` when the weight is a parameter.
    pub weight: Option<i64>,
    pub variables: &'static [&'static str],
    pub source: &'static str,
}

const fn inf(
    id: &'static str,
    weight: Option<i64>,
    variables: &'static [&'static str],
    source: &'static str,
) -> EntryInfo {
    EntryInfo {
        id,
        convention: Convention::Infinitesimal,
        weight,
        variables,
        source,
    }
}

const fn cla(
    id: &'static str,
    weight: Option<i64>,
    variables: &'static [&'static str],
    source: &'static str,
) -> EntryInfo {
    EntryInfo {
        id,
        convention: Convention::Classical,
        weight,
        variables,
        source,
    }
}

const X5: &[&str] = &["x1", "x2", "x3", "x4", "x5"];

static REGISTRY: &[EntryInfo] = &[
    inf("inversion", None, &["T"], "inversion relation"),
    inf(
        "distribution",
        None,
        &["T"],
        "distribution relation (k = 2: duplication)",
    ),
    inf("two_term", Some(1), &["T"], "two-term relation"),
    inf("feit", Some(1), &["a", "b"], "four-term relation of information theory"),
    inf(
        "feit_generalized",
        Some(1),
        &["x", "y", "s"],
        "symmetry of the three-parameter four-term form",
    ),
    inf(
        "feit_swap",
        Some(1),
        &["x", "y"],
        "exchange form of the four-term relation",
    ),
    inf(
        "five_term_v1",
        Some(1),
        X5,
        "five-term cocycle form with denom coefficients",
    ),
    inf(
        "five_term_v2",
        Some(1),
        X5,
        "five-term cocycle form with x_i denom coefficients",
    ),
    inf(
        "five_term_family",
        Some(1),
        &["a", "b", "t"],
        "one-parameter five-term family",
    ),
    inf("four_term_alt", Some(1), &["a", "b"], "second four-term form"),
    inf("kontsevich_B", Some(1), &["x", "y"], "three-variable entropy identity"),
    inf("three_term", Some(2), &["x"], "three-term relation in weight two"),
    inf("kummer_spence", Some(2), &["x", "y"], "Kummer-Spence analogue in x, y"),
    inf(
        "kummer_spence_v1",
        Some(2),
        &["a", "b"],
        "Kummer-Spence analogue in a, b",
    ),
    inf(
        "cathelineau_J",
        Some(2),
        &["a", "b", "c"],
        "22-term expression J(a, b, c)",
    ),
    inf(
        "J_specializations",
        Some(2),
        &["a", "b"],
        "J(a, b, c) at c = a, b, a/b, (1-a)/(1-b)",
    ),
    inf(
        "derived_goncharov",
        Some(2),
        &["a", "b", "c"],
        "derivative of Goncharov's equation",
    ),
    cla("inversion_classical", None, &["T"], "classical inversion relation"),
    cla(
        "distribution_classical",
        None,
        &["T"],
        "classical distribution relation",
    ),
    cla("two_term_classical", Some(2), &["x"], "dilogarithm reflection"),
    cla(
        "five_term_cocycle",
        Some(2),
        X5,
        "five-term relation in cross-ratio form",
    ),
    cla(
        "five_term_classical",
        Some(2),
        &["a", "b"],
        "five-term relation in two variables",
    ),
    cla(
        "three_term_classical",
        Some(3),
        &["x"],
        "trilogarithm three-term relation",
    ),
    cla(
        "kummer_spence_classical_v1",
        Some(3),
        &["a", "b"],
        "Kummer-Spence relation in a, b",
    ),
    cla(
        "kummer_spence_classical",
        Some(3),
        &["x", "y"],
        "Kummer-Spence relation in x, y",
    ),
    cla(
        "goncharov_classical",
        Some(3),
        &["a", "b", "c"],
        "Goncharov's 22-term trilogarithm relation",
    ),
];

/// All catalog entries, in a fixed order.
pub fn registry() -> &'static [EntryInfo] {
    REGISTRY
}

pub fn entry(id: &str) -> Result<&'static EntryInfo> {
    REGISTRY
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))
}

/// The `J` specializations, as text in `a, b`.
pub const J_SPECIALIZATIONS: [&str; 4] = ["a", "b", "a/b", "(1-a)/(1-b)"];

fn from_text<R: CoeffRing>(
    info: &EntryInfo,
    weight: i64,
    ring: &Arc<PolyRing<R>>,
    terms: &[(&str, &str)],
) -> Result<FormalSum<R>> {
    let mut s = FormalSum::new(info.id, info.source, weight, info.convention, ring);
    for (c, x) in terms {
        s.push(parse_ratfunc(ring, c)?, parse_ratfunc(ring, x)?);
    }
    Ok(s)
}

const FEIT: &[(&str, &str)] = &[("1", "a"), ("-1", "b"), ("a", "b/a"), ("1-a", "(1-b)/(1-a)")];

const FOUR_TERM_ALT: &[(&str, &str)] = &[("b", "a"), ("-a", "b"), ("a", "b/a"), ("b*(1-a)", "a*(1-b)/(b*(1-a))")];

const FIVE_TERM_FAMILY: &[(&str, &str)] = &[
    ("b+t", "a"),
    ("-(a+t)", "b"),
    ("(1+t)*a", "b/a"),
    ("t*(1-a)", "(1-b)/(1-a)"),
    ("b*(1-a)", "a*(1-b)/(b*(1-a))"),
];

const FEIT_GENERALIZED: &[(&str, &str)] = &[
    ("1-y", "(x-s)/(1-y)"),
    ("y", "s/y"),
    ("1", "y"),
    ("-(1-x)", "(y-s)/(1-x)"),
    ("-x", "s/x"),
    ("-1", "x"),
];

const FEIT_SWAP: &[(&str, &str)] = &[("1-y", "x/(1-y)"), ("-1", "x"), ("-(1-x)", "y/(1-x)"), ("1", "y")];

const KONTSEVICH_B: &[(&str, &str)] = &[("1", "x+y"), ("-1", "y"), ("-(1-y)", "x/(1-y)"), ("-y", "-x/y")];

const THREE_TERM: &[(&str, &str)] = &[("1", "1-x"), ("-1", "x"), ("x", "1-1/x")];

const KUMMER_SPENCE: &[(&str, &str)] = &[
    ("1", "x*y"),
    ("y", "x/y"),
    ("-(1-y)", "y*(1-x)/(y-1)"),
    ("1-y", "(1-x)/(1-y)"),
    ("-x*(1-y)", "y*(1-x)/(x*(1-y))"),
    ("x*(1-y)", "(x-1)/(x*(1-y))"),
    ("-(1+y)", "x"),
    ("-(1+x)", "y"),
];

const KUMMER_SPENCE_V1: &[(&str, &str)] = &[
    ("(1-b)*b/(1-b-a)", "(1-a)*a/(b*(1-b))"),
    ("(1-b)*(1-a)/(1-b-a)", "a*b/((1-b)*(1-a))"),
    ("1-b", "(1-a)/(1-b)"),
    ("-(1-b)", "b/(b-1)"),
    ("-(1-a)", "a/(a-1)"),
    ("-a", "b/a"),
    ("(a-b-1)*(1-b)/(1-b-a)", "a/(1-b)"),
    ("-(a-b+1)*b/(1-b-a)", "(1-a)/b"),
];

const CATHELINEAU_J: &[(&str, &str)] = &[
    ("c", "a"),
    ("-c", "b"),
    ("a-b+1", "c"),
    ("1-c", "1-a"),
    ("-(1-c)", "1-b"),
    ("b-a", "1-c"),
    ("-a", "c/a"),
    ("b", "c/b"),
    ("c*a", "b/a"),
    ("-(1-a)", "(1-c)/(1-a)"),
    ("1-b", "(1-c)/(1-b)"),
    ("c*(1-a)", "(1-b)/(1-a)"),
    ("c*(1-a)", "a*(1-c)/(c*(1-a))"),
    ("-c*(1-b)", "b*(1-c)/(c*(1-b))"),
    ("-b", "c*a/b"),
    ("-(1-b)", "c*(1-a)/(1-b)"),
    ("(1-c)*a", "(a-b)/a"),
    ("(1-c)*(1-a)", "(b-a)/(1-a)"),
    ("-(a-b)", "(1-c)*a/(a-b)"),
    ("-(b-a)", "(1-c)*(1-a)/(b-a)"),
    ("c*(a-b)", "(1-c)*b/(c*(a-b))"),
    ("c*(b-a)", "(1-c)*(1-b)/(c*(b-a))"),
];

/// One cyclic block of the derived Goncharov sum.
const GONCHAROV_PHI: &[(&str, &str)] = &[
    ("1", "a"),
    ("-(b-1)*(a-1)/(a*b-1)", "-b*(a-1)/(b-1)"),
    ("-(b-1)*(a-1)/(a*b-1)", "-a*(b-1)/(a-1)"),
    ("(c^2*b+c*b^2-3*c*b+1)/(c*b-1)", "(a-1)/(a*b*c-1)"),
    ("-(a*b*c-a-b-c+2)/(c*b-1)", "c*b*(a-1)/(a*b*c-1)"),
    ("-(a+b-2)/(a*b-1)", "a*b"),
    (
        "-(a^2*b*c-2*a*b*c+b+c-1)*(a-1)/((a*c-1)*(a*b-1))",
        "-a*(c-1)*(b-1)/((a-1)*(a*b*c-1))",
    ),
];

const GONCHAROV_F: &[(&str, &str)] = &[
    ("1", "a"),
    ("1", "b*(1-a)/(b-1)"),
    ("1", "a*(1-b)/(a-1)"),
    ("1", "(1-a)/(1-a*b*c)"),
    ("1", "c*b*(1-a)/(1-a*b*c)"),
    ("-1", "a*b"),
    ("-1", "-a*(1-b)*(1-c)/((1-a)*(1-a*b*c))"),
];

const FIVE_TERM_CLASSICAL: &[(&str, &str)] = &[
    ("1", "a"),
    ("-1", "b"),
    ("1", "b/a"),
    ("-1", "(1-b)/(1-a)"),
    ("1", "(1-1/b)/(1-1/a)"),
];

const THREE_TERM_CLASSICAL: &[(&str, &str)] = &[("1", "1-x"), ("1", "x"), ("1", "1-1/x"), ("-1", "1")];

const KUMMER_SPENCE_CLASSICAL_V1: &[(&str, &str)] = &[
    ("1", "a*(1-b)/(b*(1-a))"),
    ("1", "(1-a)*a/(b*(1-b))"),
    ("1", "a*b/((1-b)*(1-a))"),
    ("-2", "(1-a)/(1-b)"),
    ("-2", "b/(b-1)"),
    ("-2", "a/(a-1)"),
    ("-2", "b/a"),
    ("-2", "a/(1-b)"),
    ("-2", "(1-a)/b"),
    ("2", "1"),
];

const KUMMER_SPENCE_CLASSICAL: &[(&str, &str)] = &[
    ("1", "x*(1-y)^2/(y*(1-x)^2)"),
    ("1", "x*y"),
    ("1", "x/y"),
    ("-2", "y*(1-x)/(y-1)"),
    ("-2", "(1-x)/(1-y)"),
    ("-2", "y*(1-x)/(x*(1-y))"),
    ("-2", "(x-1)/(x*(1-y))"),
    ("-2", "x"),
    ("-2", "y"),
    ("2", "1"),
];

fn ring_for<R: CoeffRing>(coeffs: &R, info: &EntryInfo) -> Result<Arc<PolyRing<R>>> {
    PolyRing::new(coeffs.clone(), info.variables)
}

/// Cross-ratio `(a-c)(b-d) / ((a-d)(b-c))` and `denom = (a-d)(b-c)` of the
/// four variables left after omitting `skip`.
fn cross_ratio<R: CoeffRing>(ring: &Arc<PolyRing<R>>, skip: usize) -> Result<(RatFunc<R>, RatFunc<R>)> {
    let v: Vec<RatFunc<R>> = (0..5).filter(|&i| i != skip).map(|i| RatFunc::var(ring, i)).collect();
    let (a, b, c, d) = (&v[0], &v[1], &v[2], &v[3]);
    let den = a.sub(d).mul(&b.sub(c));
    let num = a.sub(c).mul(&b.sub(d));
    Ok((num.div(&den)?, den))
}

fn five_term<R: CoeffRing>(info: &EntryInfo, ring: &Arc<PolyRing<R>>, mode: u8) -> Result<FormalSum<R>> {
    let mut s = FormalSum::new(info.id, info.source, info.weight.unwrap(), info.convention, ring);
    for i in 0..5 {
        let (cr, den) = cross_ratio(ring, i)?;
        let sign = RatFunc::from_int(ring, if i % 2 == 0 { -1 } else { 1 });
        let coeff = match mode {
            0 => sign,
            1 => sign.mul(&den),
            _ => sign.mul(&den).mul(&RatFunc::var(ring, i)),
        };
        s.push(coeff, cr);
    }
    Ok(s)
}

fn roots_of_unity<R: CoeffRing>(coeffs: &R, k: i64) -> Result<Vec<R::Elem>> {
    if k == 0 {
        return Err(Error::BadParams("distribution order must be nonzero".into()));
    }
    let n = k.unsigned_abs();
    let zeta = coeffs
        .primitive_root_of_unity(n)
        .ok_or_else(|| Error::BadParams(format!("no primitive {n}-th root of unity in {}", coeffs.tag())))?;
    let mut out = vec![coeffs.one()];
    for _ in 1..n {
        let next = coeffs.mul(out.last().unwrap(), &zeta);
        out.push(next);
    }
    Ok(out)
}

fn distribution<R: CoeffRing>(info: &EntryInfo, ring: &Arc<PolyRing<R>>, weight: i64, k: i64) -> Result<FormalSum<R>> {
    let coeffs = ring.coeffs();
    let roots = roots_of_unity(coeffs, k)?;
    let t = RatFunc::var(ring, 0);
    let tk = t.pow(k)?;
    let one = RatFunc::one(ring);
    // k^{w-1} for the infinitesimal form, k^{n-1} for the classical one
    let scale = RatFunc::from_int(ring, k).pow(weight - 1)?;
    let mut s = FormalSum::new(info.id, info.source, weight, info.convention, ring);
    s.push(one.clone(), tk.clone());
    for z in roots {
        let zt = t.scale(&z);
        let c = match info.convention {
            Convention::Infinitesimal => one.sub(&tk).div(&one.sub(&zt))?,
            Convention::Classical => one.clone(),
        };
        s.push(c.mul(&scale).neg(), zt);
    }
    Ok(s)
}

/// Build a catalog entry over the coefficient field `coeffs`.
pub fn build<R: CoeffRing>(coeffs: &R, id: &str, params: &Params) -> Result<FormalSum<R>> {
    let info = entry(id)?;
    let ring = ring_for(coeffs, info)?;
    let fixed = info.weight.unwrap_or(0);
    match id {
        "inversion" | "inversion_classical" => {
            let w = params
                .weight
                .unwrap_or(if info.convention == Convention::Classical { 2 } else { 1 });
            let t = RatFunc::var(&ring, 0);
            let inv_t = RatFunc::one(&ring).div(&t)?;
            let mut s = FormalSum::new(info.id, info.source, w, info.convention, &ring);
            s.push(RatFunc::one(&ring), t.clone());
            // infinitesimal: [T] - (-1)^m T [1/T]; classical: {T} - (-1)^{n-1} {1/T}
            let odd = match info.convention {
                Convention::Infinitesimal => w.rem_euclid(2) == 1,
                Convention::Classical => (w - 1).rem_euclid(2) == 1,
            };
            let c = if info.convention == Convention::Infinitesimal {
                t
            } else {
                RatFunc::one(&ring)
            };
            s.push(if odd { c } else { c.neg() }, inv_t);
            Ok(s)
        }
        "distribution" | "distribution_classical" => {
            let w = params
                .weight
                .unwrap_or(if info.convention == Convention::Classical { 2 } else { 1 });
            distribution(info, &ring, w, params.order.unwrap_or(2))
        }
        "two_term" => from_text(info, fixed, &ring, &[("1", "T"), ("-1", "1-T")]),
        "feit" => from_text(info, fixed, &ring, FEIT),
        "feit_generalized" => from_text(info, fixed, &ring, FEIT_GENERALIZED),
        "feit_swap" => from_text(info, fixed, &ring, FEIT_SWAP),
        "five_term_v1" => five_term(info, &ring, 1),
        "five_term_v2" => five_term(info, &ring, 2),
        "five_term_family" => from_text(info, fixed, &ring, FIVE_TERM_FAMILY),
        "four_term_alt" => from_text(info, fixed, &ring, FOUR_TERM_ALT),
        "kontsevich_B" => from_text(info, fixed, &ring, KONTSEVICH_B),
        "three_term" => from_text(info, fixed, &ring, THREE_TERM),
        "kummer_spence" => from_text(info, fixed, &ring, KUMMER_SPENCE),
        "kummer_spence_v1" => from_text(info, fixed, &ring, KUMMER_SPENCE_V1),
        "cathelineau_J" => from_text(info, fixed, &ring, CATHELINEAU_J),
        "J_specializations" => {
            let i = params.spec.unwrap_or(0);
            let spec = J_SPECIALIZATIONS.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                max: J_SPECIALIZATIONS.len() - 1,
            })?;
            let j = build(coeffs, "cathelineau_J", &Params::default())?;
            let assign = vec![
                RatFunc::var(&ring, 0),
                RatFunc::var(&ring, 1),
                parse_ratfunc(&ring, spec)?,
            ];
            let mut s = j.compose(&ring, &assign)?;
            s.set_id(format!("J_specializations[c={spec}]"));
            Ok(s)
        }
        "derived_goncharov" => {
            let phi = from_text(info, fixed, &ring, GONCHAROV_PHI)?;
            let mut s = cyclic_sum(&phi, &ring)?;
            s.push(
                parse_ratfunc(&ring, "(a+b+c-3)/(a*b*c-1)")?,
                parse_ratfunc(&ring, "a*b*c")?,
            );
            Ok(s)
        }
        "two_term_classical" => from_text(info, fixed, &ring, &[("1", "x"), ("1", "1-x")]),
        "five_term_cocycle" => five_term(info, &ring, 0),
        "five_term_classical" => from_text(info, fixed, &ring, FIVE_TERM_CLASSICAL),
        "three_term_classical" => from_text(info, fixed, &ring, THREE_TERM_CLASSICAL),
        "kummer_spence_classical_v1" => from_text(info, fixed, &ring, KUMMER_SPENCE_CLASSICAL_V1),
        "kummer_spence_classical" => from_text(info, fixed, &ring, KUMMER_SPENCE_CLASSICAL),
        "goncharov_classical" => {
            let f = from_text(info, fixed, &ring, GONCHAROV_F)?;
            let mut s = cyclic_sum(&f, &ring)?;
            s.push(RatFunc::one(&ring), parse_ratfunc(&ring, "a*b*c")?);
            s.push(RatFunc::from_int(&ring, -3), RatFunc::one(&ring));
            Ok(s)
        }
        _ => Err(Error::UnknownId(id.to_string())),
    }
}

/// `g(a,b,c) + g(b,c,a) + g(c,a,b)`.
fn cyclic_sum<R: CoeffRing>(g: &FormalSum<R>, ring: &Arc<PolyRing<R>>) -> Result<FormalSum<R>> {
    let v = |i: usize| RatFunc::var(ring, i);
    let mut s = g.clone();
    for perm in [[1, 2, 0], [2, 0, 1]] {
        let shifted = g.compose(ring, &[v(perm[0]), v(perm[1]), v(perm[2])])?;
        s = s.plus(&shifted)?;
    }
    Ok(s)
}

/// Every infinitesimal entry that is checked strongly over `F_p`, with the
/// parameters exercised by default: inversion and distribution in weights
/// 1..=4, distribution orders 2 and every divisor `k > 2` of `p - 1` up to
/// `max_order`, and all `J` specializations.
pub fn finite_suite(p: u32, max_order: u32) -> Vec<(String, Params)> {
    let mut out = Vec::new();
    for w in 1..=4 {
        out.push(("inversion".to_string(), Params::weight(w)));
    }
    let mut orders = vec![2i64];
    for k in 3..=max_order.min(p - 1) {
        if (p - 1).is_multiple_of(k) {
            orders.push(k as i64);
        }
    }
    for w in 1..=4 {
        for &k in &orders {
            out.push(("distribution".to_string(), Params::distribution(w, k)));
        }
    }
    for id in [
        "two_term",
        "feit",
        "feit_generalized",
        "feit_swap",
        "five_term_v1",
        "five_term_v2",
        "five_term_family",
        "four_term_alt",
        "three_term",
        "kummer_spence",
        "kummer_spence_v1",
        "cathelineau_J",
    ] {
        out.push((id.to_string(), Params::default()));
    }
    for i in 0..J_SPECIALIZATIONS.len() {
        out.push(("J_specializations".to_string(), Params::spec(i)));
    }
    out
}
