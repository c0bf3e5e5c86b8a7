use finpolylog_core::derivmap::{reduce_mod_p, verify_derived};
use finpolylog_core::eqcat::{verify_strong, WeakOptions};
use finpolylog_core::{
    build, derive, derived_equals, parse_ratfunc, Convention, Derivation, FieldDescriptor, FormalSum, Params, PolyRing,
    Rationals,
};
use proptest::prelude::*;

const CLASSICAL: [&str; 7] = [
    "two_term_classical",
    "five_term_cocycle",
    "five_term_classical",
    "three_term_classical",
    "kummer_spence_classical_v1",
    "kummer_spence_classical",
    "goncharov_classical",
];

fn rational_text() -> impl Strategy<Value = String> {
    let atom = prop_oneof![
        Just("a".to_string()),
        Just("b".to_string()),
        (1i64..6).prop_map(|n| n.to_string()),
        Just("(1-a)".to_string()),
        Just("(a+b)".to_string()),
    ];
    (atom.clone(), atom.clone(), atom).prop_map(|(x, y, z)| format!("{x}*{y}/({z}+1)"))
}

proptest! {
    #[test]
    fn derivations_are_additive_and_leibniz(f in rational_text(), g in rational_text()) {
        let ring = PolyRing::new(FieldDescriptor::prime(101).unwrap(), &["a", "b"]).unwrap();
        let (Ok(f), Ok(g)) = (parse_ratfunc(&ring, &f), parse_ratfunc(&ring, &g)) else {
            return Ok(());
        };
        let d1 = Derivation::standard(&ring);
        let d2 = Derivation::parse(&ring, "a:b;b:a*a").unwrap();
        let sum = d1.add(&d2);
        prop_assert_eq!(sum.apply(&f), d1.apply(&f).add(&d2.apply(&f)));
        prop_assert_eq!(d1.apply(&f.add(&g)), d1.apply(&f).add(&d1.apply(&g)));
        prop_assert_eq!(d2.apply(&f.mul(&g)), d2.apply(&f).mul(&g).add(&f.mul(&d2.apply(&g))));
    }
}

#[test]
fn derived_classical_equations_hold() {
    for p in [5, 7, 11, 13] {
        let field = FieldDescriptor::prime(p).unwrap();
        let mut sums: Vec<_> = CLASSICAL
            .iter()
            .map(|id| build(&field, id, &Params::default()).unwrap())
            .collect();
        sums.push(build(&field, "distribution_classical", &Params::distribution(2, 2)).unwrap());
        for s in sums {
            let d = derive(&s, &Derivation::standard(s.ring())).unwrap();
            let m = s.weight() - 1;
            assert_eq!(d.sum.weight(), m);
            assert_eq!(d.sum.convention(), Convention::Infinitesimal);
            let opts = WeakOptions {
                budget: 400_000,
                ..WeakOptions::default()
            };
            let v = verify_derived(&d.sum, m, &opts).unwrap();
            assert!(v.weak.holds, "p={p} {}", s.id());
            assert!(v.strong.as_ref().is_some_and(|s| s.holds), "p={p} {}", s.id());
        }
    }
}

#[test]
fn constant_terms_are_dropped_with_a_notice() {
    let field = FieldDescriptor::prime(7).unwrap();
    let g = build(&field, "goncharov_classical", &Params::default()).unwrap();
    let d = derive(&g, &Derivation::standard(g.ring())).unwrap();
    assert_eq!(d.notices.len(), 1);
    assert_eq!(d.sum.len(), g.len() - 1);
}

#[test]
fn a_single_term_is_not_an_equation() {
    let field = FieldDescriptor::prime(7).unwrap();
    let ring = PolyRing::new(field, &["a", "b"]).unwrap();
    let s = FormalSum::new("ab", "", 2, Convention::Classical, &ring)
        .with_term(parse_ratfunc(&ring, "1").unwrap(), parse_ratfunc(&ring, "a*b").unwrap());
    let d = derive(&s, &Derivation::standard(&ring)).unwrap();
    let v = verify_derived(&d.sum, 1, &WeakOptions::default()).unwrap();
    assert!(!v.weak.holds);
    assert!(v.weak.counterexample_text.is_some());
    assert!(!v.strong.unwrap().holds);
}

#[test]
fn zero_derivation_gives_the_empty_relation() {
    let field = FieldDescriptor::prime(11).unwrap();
    let s = build(&field, "five_term_classical", &Params::default()).unwrap();
    let d = derive(&s, &Derivation::zero(s.ring())).unwrap();
    assert!(d.sum.merged().is_empty());
}

#[test]
fn derived_goncharov_matches_catalog() {
    for p in [7, 11, 13] {
        let field = FieldDescriptor::prime(p).unwrap();
        let g = build(&field, "goncharov_classical", &Params::default()).unwrap();
        let d = derive(&g, &Derivation::standard(g.ring())).unwrap();
        let cat = build(&field, "derived_goncharov", &Params::default()).unwrap();
        let m = derived_equals(&d.sum, &cat, 2).unwrap();
        assert!(m.equal, "p={p} {:?}", m.chain);
        assert!(verify_strong(&cat, 2).unwrap().holds, "p={p}");
    }
}

#[test]
fn five_term_derives_to_feit_shape() {
    for p in [5, 7, 11, 13, 17] {
        let field = FieldDescriptor::prime(p).unwrap();
        let five = build(&field, "five_term_classical", &Params::default()).unwrap();
        let d = derive(&five, &Derivation::standard(five.ring())).unwrap();
        let feit = build(&field, "feit", &Params::default()).unwrap();
        let m = derived_equals(&d.sum, &feit, 1).unwrap();
        assert!(m.equal, "p={p}");
        assert!(m.scalar.is_some());
    }
}

#[test]
fn rational_derivation_reduces_to_the_mod_p_one() {
    for id in CLASSICAL {
        let q = build(&Rationals, id, &Params::default()).unwrap();
        let dq = derive(&q, &Derivation::standard(q.ring())).unwrap();
        for p in [7, 11, 13] {
            let field = FieldDescriptor::prime(p).unwrap();
            let reduced = reduce_mod_p(&dq.sum, &field).unwrap();
            let s = build(&field, id, &Params::default()).unwrap();
            let direct = derive(&s, &Derivation::standard(s.ring())).unwrap();
            let m = derived_equals(&reduced, &direct.sum, dq.sum.weight()).unwrap();
            assert!(m.equal, "{id} p={p}");
            assert_eq!(m.scalar.as_deref(), Some("1"));
        }
    }
}
