use std::collections::BTreeMap;
use std::time::Instant;

use finpolylog_core::cocycle::{
    check_cocycle, check_equation_b, check_equation_c, coboundary_solve, entropy_all_orderings, entropy_mod_p_with,
    group_check, main_identity_check, random_distribution, GroupCheckOptions, RationalDistribution,
};
use finpolylog_core::derivmap::verify_derived;
use finpolylog_core::eqcat::{
    entry, finite_suite, lift_to_extension, registry, verify_strong, verify_weak_with, Verdict, WeakOptions,
};
use finpolylog_core::field::build_extension;
use finpolylog_core::finlog::{special_values, special_values_csv, RowStatus};
use finpolylog_core::padic::{besser_coefficients, clean_check, construct_family, verify_recursion};
use finpolylog_core::solver::characterize_with;
use finpolylog_core::{
    build, derive as derive_sum, derived_equals, Convention, Derivation, ExactRational, FieldDescriptor, FormalSum,
    Params, Preset,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{Record, Status};
use crate::{CocycleArgs, DeriveArgs, EntropyArgs, Mode, PadicArgs, SolveArgs, TablesArgs, VerifyArgs};

pub enum CmdError {
    /// Bad input, detected before anything runs.
    Config(String),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CmdError {
    fn from(e: E) -> Self {
        CmdError::Runtime(e.into())
    }
}

type Result<T> = std::result::Result<T, CmdError>;

pub struct Progress {
    pub quiet: bool,
}

impl Progress {
    fn line(&self, start: Instant, what: &str, status: Status) {
        if !self.quiet {
            eprintln!("{what}: {status:?} ({:.2}s)", start.elapsed().as_secs_f64());
        }
    }
}

fn params_text(params: &Params) -> String {
    let mut s = String::new();
    if let Some(w) = params.weight {
        s.push_str(&format!(" --weight {w}"));
    }
    if let Some(k) = params.order {
        s.push_str(&format!(" --order {k}"));
    }
    if let Some(i) = params.spec {
        s.push_str(&format!(" --spec {i}"));
    }
    s
}

fn params_json(params: &Params) -> Value {
    json!({ "weight": params.weight, "order": params.order, "spec": params.spec })
}

fn verdict_json(v: &Verdict) -> Value {
    let mut d = json!({
        "holds": v.holds,
        "mode": v.mode,
    });
    let m = d.as_object_mut().expect("object");
    match v.mode {
        finpolylog_core::eqcat::Mode::Strong => {
            m.insert(
                "residual".into(),
                json!(v.residual_text.as_deref().map(|r| truncate(r, 400))),
            );
        }
        finpolylog_core::eqcat::Mode::Weak => {
            m.insert("points_checked".into(), json!(v.points_checked));
            m.insert("points_skipped".into(), json!(v.points_skipped));
            m.insert("sampled".into(), json!(v.sampled));
            m.insert("counterexample".into(), json!(v.counterexample_text));
        }
    }
    d
}

fn truncate(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.to_string()
    } else {
        format!("{}...", s.chars().take(n).collect::<String>())
    }
}

fn params_from(weight: Option<i64>, order: Option<i64>, spec: Option<usize>) -> Params {
    Params { weight, order, spec }
}

pub fn verify(a: &VerifyArgs, progress: &Progress) -> Result<Vec<Record>> {
    if a.ext == 0 || a.ext > 4 {
        return Err(CmdError::Config(format!(
            "--ext must be between 1 and 4, got {}",
            a.ext
        )));
    }
    if a.point_budget == 0 {
        return Err(CmdError::Config("--point-budget must be positive".into()));
    }
    let explicit = params_from(a.weight, a.order, a.spec);
    let named: Vec<&str> = a.eq.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    for id in &named {
        if matches!(*id, "all-finite" | "all") {
            continue;
        }
        let info = entry(id).map_err(|e| CmdError::Config(e.to_string()))?;
        if info.convention == Convention::Classical {
            return Err(CmdError::Config(format!(
                "`{id}` is a classical relation; use `derive --eq {id}`"
            )));
        }
    }
    let opts = WeakOptions {
        budget: a.point_budget,
        allow_sampling: !a.no_sampling,
        seed: a.seed,
    };
    let mut records = Vec::new();
    for &p in &a.p.0 {
        let field = FieldDescriptor::prime(p)?;
        let mut jobs: Vec<(String, Params)> = Vec::new();
        for id in &named {
            match *id {
                "all-finite" => jobs.extend(finite_suite(p, a.max_order.unwrap_or(p - 1))),
                "all" => jobs.extend(
                    registry()
                        .iter()
                        .filter(|e| e.convention == Convention::Infinitesimal)
                        .map(|e| (e.id.to_string(), explicit.clone())),
                ),
                id => jobs.push((id.to_string(), explicit.clone())),
            }
        }
        for (id, params) in jobs {
            let repro = |mode: &str| {
                let ext = if a.ext > 1 && mode == "weak" {
                    format!(" --ext {}", a.ext)
                } else {
                    String::new()
                };
                format!(
                    "finpolylog verify --eq {id}{} --p {p} --mode {mode}{ext}",
                    params_text(&params)
                )
            };
            let sum = match build(&field, &id, &params) {
                Ok(s) => s,
                Err(e) => {
                    records.push(Record::error(&id, Some(p), "pass", e, repro("strong")));
                    continue;
                }
            };
            let m = sum.weight();
            if matches!(a.mode, Mode::Strong | Mode::Both) {
                let start = Instant::now();
                let r = match verify_strong(&sum, m) {
                    Ok(v) => check_record(&id, p, &params, "strong", &field, &v, || repro("strong")),
                    Err(e) => Record::error(&id, Some(p), "pass", e, repro("strong")),
                };
                progress.line(start, &format!("{id} p={p} strong"), r.status);
                records.push(r);
            }
            if matches!(a.mode, Mode::Weak | Mode::Both) {
                let start = Instant::now();
                let run = || -> anyhow::Result<(Verdict, FieldDescriptor)> {
                    if a.ext > 1 {
                        let big = build_extension(p, a.ext)?;
                        let lifted = lift_to_extension(&sum, &big)?;
                        Ok((verify_weak_with(&lifted, m, &opts)?, big))
                    } else {
                        Ok((verify_weak_with(&sum, m, &opts)?, field.clone()))
                    }
                };
                let r = match run() {
                    Ok((v, f)) => check_record(&id, p, &params, "weak", &f, &v, || repro("weak")),
                    Err(e) => Record::error(&id, Some(p), "pass", e, repro("weak")),
                };
                progress.line(start, &format!("{id} p={p} weak"), r.status);
                records.push(r);
            }
        }
    }
    Ok(records)
}

fn check_record(
    id: &str,
    p: u32,
    params: &Params,
    mode: &str,
    field: &FieldDescriptor,
    v: &Verdict,
    repro: impl FnOnce() -> String,
) -> Record {
    let mut detail = verdict_json(v);
    let m = detail.as_object_mut().expect("object");
    m.insert("params".into(), params_json(params));
    m.insert("field".into(), json!(field.tag()));
    Record::new(format!("{id} {mode}"), Some(p), detail).expect("pass", v.holds, repro)
}

/// What the characterization results lead one to expect, where known.
fn expectation(preset: Preset, p: u32) -> Option<(String, Box<dyn Fn(usize) -> bool>)> {
    let one = || -> Option<(String, Box<dyn Fn(usize) -> bool>)> { Some(("dim = 1".into(), Box::new(|d| d == 1))) };
    match preset {
        Preset::Feit | Preset::L1Triple if p >= 5 => one(),
        Preset::Ks | Preset::J if [7, 11, 13].contains(&p) => one(),
        Preset::DuplicationThreeTerm if p >= 7 => one(),
        Preset::L2Pair if (5..200).contains(&p) => one(),
        Preset::ThreeTerm if p >= 5 => {
            let bound = ((p - 1) / 3 + 1) as usize;
            Some((format!("dim >= {bound}"), Box::new(move |d| d >= bound)))
        }
        _ => None,
    }
}

pub fn solve(a: &SolveArgs, progress: &Progress) -> Result<Vec<Record>> {
    if a.budget == 0 {
        return Err(CmdError::Config("--budget must be positive".into()));
    }
    let mut records = Vec::new();
    for &p in &a.p.0 {
        let start = Instant::now();
        let check = format!("{}", a.preset);
        let repro = || format!("finpolylog solve --preset {} --p {p} --budget {}", a.preset, a.budget);
        let r = match characterize_with(a.preset, p, a.budget) {
            Ok(rep) => {
                let detail = serde_json::to_value(&rep)?;
                let rec = Record::new(&check, Some(p), detail);
                match expectation(a.preset, p) {
                    Some((text, ok)) => rec.expect(text, ok(rep.kernel_dim) && rep.self_check, repro),
                    None => rec,
                }
            }
            Err(e) => Record::error(
                &check,
                Some(p),
                "kernel computed",
                format!("{} at p={p}: {e}", a.preset),
                repro(),
            ),
        };
        progress.line(start, &format!("{check} p={p}"), r.status);
        records.push(r);
    }
    Ok(records)
}

pub fn derive(a: &DeriveArgs, progress: &Progress) -> Result<Vec<Record>> {
    let info = entry(&a.eq).map_err(|e| CmdError::Config(e.to_string()))?;
    if info.convention != Convention::Classical {
        return Err(CmdError::Config(format!("`{}` is not a classical relation", a.eq)));
    }
    if let Some(c) = &a.compare {
        let other = entry(c).map_err(|e| CmdError::Config(e.to_string()))?;
        if other.convention != Convention::Infinitesimal || other.variables != info.variables {
            return Err(CmdError::Config(format!(
                "--compare needs an infinitesimal id in the variables {:?}, got `{c}`",
                info.variables
            )));
        }
    }
    let params = params_from(a.weight, a.order, None);
    let opts = WeakOptions {
        budget: a.point_budget,
        allow_sampling: true,
        seed: a.seed,
    };
    let mut records = Vec::new();
    for &p in &a.verify.0 {
        let start = Instant::now();
        let field = FieldDescriptor::prime(p)?;
        let sum = build(&field, &a.eq, &params)?;
        let d = match &a.derivation {
            Some(text) => {
                Derivation::parse(sum.ring(), text).map_err(|e| CmdError::Config(format!("--derivation: {e}")))?
            }
            None => Derivation::standard(sum.ring()),
        };
        let repro = || {
            let mut s = format!("finpolylog derive --eq {}{} --verify {p}", a.eq, params_text(&params));
            if let Some(t) = &a.derivation {
                s.push_str(&format!(" --derivation \"{t}\""));
            }
            if let Some(c) = &a.compare {
                s.push_str(&format!(" --compare {c}"));
            }
            s
        };
        let derived = match derive_sum(&sum, &d) {
            Ok(x) => x,
            Err(e) => {
                records.push(Record::error(format!("derive {}", a.eq), Some(p), "pass", e, repro()));
                continue;
            }
        };
        let m = derived.sum.weight();
        let v = verify_derived(&derived.sum, m, &opts)?;
        let mut detail = json!({
            "derived": derived.sum.to_text(),
            "weight": m,
            "notices": derived.notices,
            "weak": verdict_json(&v.weak),
            "strong": v.strong.as_ref().map(verdict_json),
            "strong_error": v.strong_error,
        });
        let mut ok = v.weak.holds;
        if let Some(c) = &a.compare {
            let other: FormalSum<FieldDescriptor> = build(&field, c, &Params::default())?;
            let mt = derived_equals(&derived.sum, &other, m)?;
            ok &= mt.equal;
            detail["match"] = serde_json::to_value(&mt)?;
        }
        let r = Record::new(format!("derive {}", a.eq), Some(p), detail).expect("pass", ok, repro);
        progress.line(start, &format!("derive {} p={p}", a.eq), r.status);
        records.push(r);
    }
    Ok(records)
}

pub fn padic(a: &PadicArgs) -> Result<Vec<Record>> {
    let nothing = a.clean.is_none() && a.recursion.is_none() && a.family.is_none();
    let clean = a.clean.or(nothing.then_some(crate::args::Range { start: 2, end: 12 }));
    let recursion = a
        .recursion
        .or(nothing.then_some(crate::args::Range { start: 3, end: 10 }));
    let family = a.family.or(nothing.then_some(10));
    let mut records = Vec::new();
    if let Some(r) = clean {
        if r.start < 1 {
            return Err(CmdError::Config("--clean starts at 1".into()));
        }
        for n in r.iter() {
            let c = besser_coefficients(n);
            let text: Vec<String> = c.iter().map(ExactRational::to_string).collect();
            records.push(
                Record::new(format!("clean n={n}"), None, json!({ "coefficients": text })).expect(
                    "clean",
                    clean_check(&c),
                    || format!("finpolylog padic --clean {n}"),
                ),
            );
        }
    }
    if let Some(r) = recursion {
        if r.start < 3 || r.end > a.depth {
            return Err(CmdError::Config(format!(
                "--recursion needs 3 <= n <= depth ({})",
                a.depth
            )));
        }
        for n in r.iter() {
            let ok = verify_recursion(n)?;
            records.push(
                Record::new(format!("recursion n={n}"), None, json!({}))
                    .expect("holds", ok, || format!("finpolylog padic --recursion {n}")),
            );
        }
    }
    if let Some(top) = family {
        if top < 2 || top > a.depth {
            return Err(CmdError::Config(format!(
                "--family needs 2 <= n <= depth ({})",
                a.depth
            )));
        }
        let choices: BTreeMap<usize, ExactRational> = a.lambda.iter().map(|l| (l.n, l.value.clone())).collect();
        let fam = construct_family(top, &choices, a.depth)?;
        let repro = || {
            let mut s = format!("finpolylog padic --family {top}");
            for l in &a.lambda {
                s.push_str(&format!(" --lambda {}={}", l.n, l.value));
            }
            s
        };
        for level in &fam.levels {
            let n = level.n;
            let mut ok = level.clean && level.linked;
            let mut expected = "clean and linked".to_string();
            if choices.is_empty() {
                ok &= level.coefficients == besser_coefficients(n);
                expected.push_str(", Besser coefficients");
            }
            records.push(
                Record::new(format!("family n={n}"), None, serde_json::to_value(level)?).expect(expected, ok, repro),
            );
        }
    }
    Ok(records)
}

pub fn entropy(a: &EntropyArgs) -> Result<Vec<Record>> {
    let dists = a
        .dist
        .iter()
        .map(|d| RationalDistribution::parse(d).map_err(|e| CmdError::Config(format!("--dist {d}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let groups = a
        .groups
        .iter()
        .map(|g| {
            g.split('|')
                .map(|part| {
                    part.split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| {
                            s.parse::<ExactRational>()
                                .map_err(|_| CmdError::Config(format!("--groups: not a rational '{s}'")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if a.random > 0 && a.max_outcomes < 2 {
        return Err(CmdError::Config("--max-outcomes must be at least 2".into()));
    }
    let mut records = Vec::new();
    for &p in &a.p.0 {
        for (text, d) in a.dist.iter().zip(&dists) {
            records.push(entropy_record(text, d, p, a.permutation_budget));
        }
        for (text, g) in a.groups.iter().zip(&groups) {
            let check = format!("chain rule {text}");
            let repro = || format!("finpolylog entropy --groups \"{text}\" --p {p}");
            records.push(match main_identity_check(g, p) {
                Ok(v) => Record::new(check, Some(p), serde_json::to_value(&v)?).expect("holds", v.holds, repro),
                Err(e) => Record::new(check, Some(p), json!({ "not_defined": e.to_string() })),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ p as u64);
        for i in 0..a.random {
            let k = 2 + i % (a.max_outcomes - 1);
            let d = random_distribution(&mut rng, k, p);
            let text: Vec<String> = d.probs().iter().map(ExactRational::to_string).collect();
            let text = text.join(",");
            let values = entropy_all_orderings(&d, p)?;
            let same = values.windows(2).all(|w| w[0] == w[1]);
            let rec = Record::new(
                format!("order independence {text}"),
                Some(p),
                json!({ "values": values.first(), "admissible_orderings": values.len() }),
            );
            records.push(if values.is_empty() {
                rec
            } else {
                rec.expect("same value in every ordering", same, || {
                    format!("finpolylog entropy --dist {text} --p {p}")
                })
            });
        }
    }
    Ok(records)
}

fn entropy_record(text: &str, d: &RationalDistribution, p: u32, budget: u64) -> Record {
    let check = format!("entropy {text}");
    let value = match entropy_mod_p_with(d, p, budget) {
        Ok(v) => v,
        Err(e) => return Record::new(check, Some(p), json!({ "not_defined": e.to_string() })),
    };
    let mut detail = serde_json::to_value(&value).expect("serializes");
    let nonzero = d
        .probs()
        .iter()
        .filter(|q| **q != ExactRational::from_integer(0.into()))
        .count();
    if nonzero > 8 {
        return Record::new(check, Some(p), detail);
    }
    let values = entropy_all_orderings(d, p).unwrap_or_default();
    let same = values.iter().all(|&v| v == value.value);
    detail["admissible_orderings"] = json!(values.len());
    Record::new(check, Some(p), detail).expect("same value in every ordering", same, || {
        format!("finpolylog entropy --dist {text} --p {p}")
    })
}

pub fn cocycle(a: &CocycleArgs, progress: &Progress) -> Result<Vec<Record>> {
    let opts = GroupCheckOptions {
        exhaustive_limit: a.exhaustive_limit,
        samples: a.samples,
        seed: a.seed,
    };
    let mut records = Vec::new();
    for &p in &a.p.0 {
        let start = Instant::now();
        let repro = || format!("finpolylog cocycle --p {p}");
        let v = check_cocycle(p)?;
        records.push(Record::new("cocycle", Some(p), serde_json::to_value(&v)?).expect("holds", v.holds(), repro));
        let c = coboundary_solve(p)?;
        let ok = !c.is_coboundary && c.certificate_valid == Some(true);
        records.push(Record::new("coboundary", Some(p), serde_json::to_value(&c)?).expect(
            "not a coboundary",
            ok,
            repro,
        ));
        let g = group_check(p, &opts)?;
        records.push(
            Record::new("group", Some(p), serde_json::to_value(&g)?).expect("holds", g.holds(), || {
                format!(
                    "finpolylog cocycle --p {p} --exhaustive-limit {} --samples {} --seed {}",
                    a.exhaustive_limit, a.samples, a.seed
                )
            }),
        );
        for (name, check) in [
            ("equation B", check_equation_b(p)?),
            ("equation C", check_equation_c(p)?),
        ] {
            records.push(Record::new(name, Some(p), serde_json::to_value(&check)?).expect("holds", check.holds, repro));
        }
        progress.line(start, &format!("cocycle p={p}"), Status::Info);
    }
    Ok(records)
}

pub fn tables(a: &TablesArgs) -> Result<Vec<Record>> {
    let mut records = Vec::new();
    for &p in &a.p.0 {
        for row in special_values(p)? {
            let check = format!("L at {} ({})", row.argument, row.n_or_m);
            let detail = serde_json::to_value(&row)?;
            let rec = Record::new(check, Some(p), detail);
            records.push(match row.status {
                RowStatus::Logged => rec,
                s => rec.expect("computed = expected", s == RowStatus::Pass, || {
                    format!("finpolylog tables --p {p}")
                }),
            });
        }
    }
    Ok(records)
}

/// The special-value table in its own CSV layout.
pub fn tables_csv(a: &TablesArgs) -> anyhow::Result<String> {
    let mut rows = Vec::new();
    for &p in &a.p.0 {
        rows.extend(special_values(p)?);
    }
    Ok(special_values_csv(&rows))
}

pub fn list() -> Vec<Record> {
    let mut out: Vec<Record> = registry()
        .iter()
        .map(|e| Record::new(e.id, None, serde_json::to_value(e).expect("serializes")))
        .collect();
    for preset in Preset::ALL {
        let t = preset.template(7);
        let labels: Vec<String> = t.constraints.iter().map(|c| c.label()).collect();
        out.push(Record::new(
            format!("preset {preset}"),
            None,
            json!({ "constraints": labels, "vanish_at_zero": t.vanish_at_zero, "reference_weight": preset.reference_weight() }),
        ));
    }
    out
}
