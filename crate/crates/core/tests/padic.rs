use std::collections::BTreeMap;

use finpolylog_core::padic::{
    besser_coefficients, build_Fn, clean_check, clean_sum, construct_family, linked, verify_recursion,
    verify_recursion_with, verify_reformulated, z_ring, DiffRingElement, DEFAULT_DEPTH,
};
use finpolylog_core::{parse_ratfunc, ExactRational};
use proptest::prelude::*;

fn q(a: i64, b: i64) -> ExactRational {
    ExactRational::new(a.into(), b.into())
}

#[test]
fn besser_coefficients_are_clean() {
    for n in 2..=12 {
        assert!(clean_check(&besser_coefficients(n)), "n={n}");
    }
    // n = 3 by hand: -3/3! + 2/2! - (1/2)/1! = 0
    assert_eq!(besser_coefficients(3), vec![q(-3, 1), q(2, 1), q(-1, 2)]);
}

#[test]
fn recursion_holds() {
    for n in 3..=10 {
        assert!(verify_recursion(n).unwrap(), "n={n}");
        assert!(verify_reformulated(n).unwrap(), "n={n}");
    }
}

#[test]
fn perturbed_coefficient_breaks_recursion() {
    for n in 3..=6 {
        for k in 0..n {
            let mut a = besser_coefficients(n);
            a[k] += q(1, 7);
            let ok = verify_recursion_with(&a, &besser_coefficients(n - 1), DEFAULT_DEPTH).unwrap();
            assert!(!ok, "n={n} k={k}");
            assert!(!clean_check(&a));
        }
    }
}

#[test]
fn family_reproduces_besser() {
    let fam = construct_family(10, &BTreeMap::new(), DEFAULT_DEPTH).unwrap();
    for level in &fam.levels {
        let n = level.n;
        assert!(level.clean && level.linked, "n={n}");
        assert_eq!(level.coefficients, besser_coefficients(n), "n={n}");
        if n >= 3 {
            assert_eq!(level.lambda, Some(q(1, n as i64 - 1)));
            assert_eq!(level.mu, Some(q(-1, n as i64 - 1)));
        }
    }
    assert_eq!(fam.levels[1].constraint.as_deref(), Some("lambda3 - mu3 = 1"));
}

#[test]
fn family_constraint_chain() {
    // lambda_4 - mu_4 = 1 / (2 - lambda_3) for several choices of lambda_3
    for l3 in [q(1, 2), q(1, 3), q(3, 1), q(-5, 4)] {
        let mut choice = BTreeMap::new();
        choice.insert(3, l3.clone());
        let fam = construct_family(4, &choice, DEFAULT_DEPTH).unwrap();
        let three = &fam.levels[1];
        let four = &fam.levels[2];
        assert_eq!(three.lambda.clone().unwrap() - three.mu.clone().unwrap(), q(1, 1));
        let diff = four.lambda.clone().unwrap() - four.mu.clone().unwrap();
        assert_eq!(diff, q(1, 1) / (q(2, 1) - l3.clone()), "lambda3={l3}");
        assert!(four.clean && four.linked);
    }
}

#[test]
fn singular_choice_is_reported() {
    // lambda_3 = 2 makes the level-4 condition degenerate
    let mut choice = BTreeMap::new();
    choice.insert(3, q(2, 1));
    assert!(construct_family(5, &choice, DEFAULT_DEPTH).is_err());
}

#[test]
fn depth_is_enforced() {
    assert!(build_Fn(&besser_coefficients(5), 4).is_err());
    assert!(construct_family(20, &BTreeMap::new(), DEFAULT_DEPTH).is_err());
}

#[test]
fn linked_rejects_wrong_parameters() {
    let (a, b) = (besser_coefficients(4), besser_coefficients(3));
    assert!(linked(&a, &b, &q(1, 3), &q(-1, 3), DEFAULT_DEPTH).unwrap());
    assert!(!linked(&a, &b, &q(1, 3), &q(1, 3), DEFAULT_DEPTH).unwrap());
}

fn element(depth: usize, spec: &[(u8, i64)]) -> DiffRingElement {
    let mut out = DiffRingElement::zero(depth);
    for &(g, c) in spec {
        let gen = if g == 0 {
            DiffRingElement::log(depth)
        } else {
            DiffRingElement::li(depth, g as usize).unwrap()
        };
        let coeff = parse_ratfunc(z_ring(), &format!("{c}*z/(1+z)")).unwrap();
        out = out.add(&gen.scale(&coeff));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn d_is_a_derivation(
        a in prop::collection::vec((0u8..4, -3i64..4), 1..3),
        b in prop::collection::vec((0u8..4, -3i64..4), 1..3),
    ) {
        let (f, g) = (element(5, &a), element(5, &b));
        prop_assert_eq!(f.add(&g).big_d(), f.big_d().add(&g.big_d()));
        prop_assert_eq!(f.mul(&g).big_d(), f.big_d().mul(&g).add(&f.mul(&g.big_d())));
    }
}

#[test]
fn clean_sum_is_linear() {
    let a = besser_coefficients(5);
    let b: Vec<_> = (0..5).map(|k| q(k as i64 + 1, 3)).collect();
    let s: Vec<_> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    assert_eq!(clean_sum(&s), clean_sum(&a) + clean_sum(&b));
}
