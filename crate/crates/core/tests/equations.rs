use finpolylog_core::derivmap::derived_equals;
use finpolylog_core::eqcat::{
    build, finite_suite, lift_to_extension, normalize_mod_inversion, registry, verify_strong, verify_weak,
    verify_weak_with, Convention, FormalSum, Params, WeakOptions,
};
use finpolylog_core::field::{build_extension, is_prime};
use finpolylog_core::finlog::lhat_eval;
use finpolylog_core::{parse_ratfunc, FieldDescriptor, RatFunc};

#[test]
fn registry_covers_the_catalog() {
    let ids: Vec<&str> = registry().iter().map(|e| e.id).collect();
    for id in [
        "inversion",
        "distribution",
        "two_term",
        "feit",
        "feit_generalized",
        "five_term_v1",
        "five_term_v2",
        "five_term_family",
        "four_term_alt",
        "kontsevich_B",
        "three_term",
        "kummer_spence",
        "kummer_spence_v1",
        "cathelineau_J",
        "J_specializations",
        "derived_goncharov",
        "five_term_classical",
        "five_term_cocycle",
        "three_term_classical",
        "kummer_spence_classical",
        "goncharov_classical",
        "distribution_classical",
    ] {
        assert!(ids.contains(&id), "{id} missing");
    }
    let f = FieldDescriptor::prime(13).unwrap();
    for e in registry() {
        let s = build(&f, e.id, &Params::default()).unwrap();
        assert!(!s.is_empty(), "{}", e.id);
        assert_eq!(s.convention(), e.convention);
        assert_eq!(s.variables().len(), e.variables.len());
    }
    // the symmetry relation is the two-term relation, the elementary
    // identity x H(1/x) = -H(x) is inversion in weight 1
    let two = build(&f, "two_term", &Params::default()).unwrap();
    assert_eq!(two.to_string(), "(1)[T] + (12)[12*T + 1]");
    let inv = build(&f, "inversion", &Params::weight(1)).unwrap();
    assert_eq!(inv.to_string(), "(1)[T] + (T)[(1)/(T)]");
}

#[test]
fn strong_suite_small_primes() {
    for p in [5, 7] {
        let f = FieldDescriptor::prime(p).unwrap();
        for (id, params) in finite_suite(p, 12) {
            let s = build(&f, &id, &params).unwrap();
            let v = verify_strong(&s, s.weight()).unwrap();
            assert!(v.holds, "p={p} {id} {params:?}");
        }
    }
}

#[test]
fn strong_implies_weak_over_base_and_quadratic_extension() {
    for p in [5, 7] {
        let f = FieldDescriptor::prime(p).unwrap();
        let f2 = build_extension(p, 2).unwrap();
        let opts = WeakOptions {
            budget: 200_000,
            ..WeakOptions::default()
        };
        for (id, params) in finite_suite(p, 12) {
            let s = build(&f, &id, &params).unwrap();
            if !verify_strong(&s, s.weight()).unwrap().holds {
                continue;
            }
            let w = verify_weak_with(&s, s.weight(), &opts).unwrap();
            assert!(w.holds, "p={p} {id}");
            let lifted = lift_to_extension(&s, &f2).unwrap();
            let w2 = verify_weak_with(&lifted, s.weight(), &opts).unwrap();
            assert!(w2.holds, "p={p}^2 {id}");
        }
    }
}

#[test]
fn weak_check_agrees_with_direct_evaluation() {
    let f = FieldDescriptor::prime(7).unwrap();
    let s = build(&f, "kummer_spence", &Params::default()).unwrap();
    let v = verify_weak(&s, 2).unwrap();
    let mut ok = 0;
    for x in 0..7 {
        for y in 0..7 {
            if let Ok(val) = lhat_eval(2, &s, &[f.from_u32(x), f.from_u32(y)]) {
                assert_eq!(val.residue(), 0);
                ok += 1;
            }
        }
    }
    assert_eq!(v.points_checked, ok);
    assert_eq!(v.points_checked + v.points_skipped, 49);
}

#[test]
fn distribution_of_order_minus_one_is_inversion() {
    for p in [5, 7, 11, 13] {
        let f = FieldDescriptor::prime(p).unwrap();
        for m in 1..=4 {
            let d = build(&f, "distribution", &Params::distribution(m, -1)).unwrap();
            let i = build(&f, "inversion", &Params::weight(m)).unwrap();
            let r = derived_equals(&d, &i, m).unwrap();
            assert!(r.equal, "p={p} m={m} {:?}", r.chain);
            assert_eq!(r.scalar.as_deref(), Some("1"), "p={p} m={m}");
        }
    }
}

#[test]
fn three_term_at_x_and_one_minus_x_gives_inversion() {
    for p in [5, 7, 11, 13] {
        let f = FieldDescriptor::prime(p).unwrap();
        let three = build(&f, "three_term", &Params::default()).unwrap();
        let ring = three.ring().clone();
        let reflected = three.compose(&ring, &[parse_ratfunc(&ring, "1-x").unwrap()]).unwrap();
        let sum = three.plus(&reflected).unwrap();
        // (1-x) * inversion(2) at y = x/(x-1)
        let inv = build(&f, "inversion", &Params::weight(2)).unwrap();
        let at = inv.compose(&ring, &[parse_ratfunc(&ring, "x/(x-1)").unwrap()]).unwrap();
        let mut expected = FormalSum::new("expected", "", 2, Convention::Infinitesimal, &ring);
        for t in at.terms() {
            expected.push(t.coeff.mul(&parse_ratfunc(&ring, "1-x").unwrap()), t.arg.clone());
        }
        // both sides vanish modulo inversion
        assert!(normalize_mod_inversion(&sum, 2).is_empty(), "p={p}");
        assert!(normalize_mod_inversion(&expected, 2).is_empty(), "p={p}");
        assert!(!sum.is_empty());
        assert!(derived_equals(&sum, &expected, 2).unwrap().equal, "p={p}");
    }
}

#[test]
fn kontsevich_b_holds_pointwise() {
    for p in (3..=31).filter(|&p| is_prime(p)) {
        let f = FieldDescriptor::prime(p as u32).unwrap();
        let s = build(&f, "kontsevich_B", &Params::default()).unwrap();
        let v = verify_weak(&s, 1).unwrap();
        assert!(v.holds && v.counterexample.is_none(), "p={p}");
        let strong = verify_strong(&s, 1).unwrap();
        eprintln!("kontsevich_B p={p}: strong {}", strong.holds);
    }
}

#[test]
fn mutated_feit_fails_both_ways() {
    let f = FieldDescriptor::prime(7).unwrap();
    let feit = build(&f, "feit", &Params::default()).unwrap();
    let ring = feit.ring().clone();
    let mut bad = feit.empty_like();
    for (i, t) in feit.terms().iter().enumerate() {
        let c = if i == 2 {
            t.coeff.add(&RatFunc::one(&ring))
        } else {
            t.coeff.clone()
        };
        bad.push(c, t.arg.clone());
    }
    let s = verify_strong(&bad, 1).unwrap();
    assert!(!s.holds);
    assert!(s.residual.as_ref().is_some_and(|r| !r.is_zero()));
    let w = verify_weak(&bad, 1).unwrap();
    assert!(!w.holds);
    let pt = w.counterexample.unwrap();
    assert_ne!(lhat_eval(1, &bad, &pt).unwrap().residue(), 0);
    // deterministic: the first failing point in enumeration order
    assert_eq!(verify_weak(&bad, 1).unwrap().counterexample_text, w.counterexample_text);
}

#[test]
fn wrong_weight_fails() {
    let f = FieldDescriptor::prime(11).unwrap();
    let s = build(&f, "three_term", &Params::default()).unwrap();
    assert!(verify_strong(&s, 2).unwrap().holds);
    assert!(!verify_strong(&s, 3).unwrap().holds);
    assert!(!verify_weak(&s, 3).unwrap().holds);
}

#[test]
fn classical_sums_are_not_checked_directly() {
    let f = FieldDescriptor::prime(7).unwrap();
    let s = build(&f, "five_term_classical", &Params::default()).unwrap();
    assert!(verify_strong(&s, 2).is_err());
}
