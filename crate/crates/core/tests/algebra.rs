use std::sync::Arc;

use finpolylog_core::field::build_extension;
use finpolylog_core::finlog::recipe_prove_zero;
use finpolylog_core::{parse_ratfunc, FieldDescriptor, Monomial, PolyRing, RatFunc, SparsePoly};
use proptest::prelude::*;

fn ring(p: u32) -> Arc<PolyRing<FieldDescriptor>> {
    PolyRing::new(FieldDescriptor::prime(p).unwrap(), &["x", "y"]).unwrap()
}

fn poly(r: &Arc<PolyRing<FieldDescriptor>>, terms: &[(u32, u32, u32)]) -> SparsePoly<FieldDescriptor> {
    let f = r.coeffs();
    SparsePoly::from_terms(
        r,
        terms
            .iter()
            .map(|&(a, b, c)| (Monomial::from_exponents(&[a, b]), f.from_u32(c))),
    )
}

fn terms() -> impl Strategy<Value = Vec<(u32, u32, u32)>> {
    prop::collection::vec((0u32..4, 0u32..4, 0u32..7), 0..6)
}

proptest! {
    #[test]
    fn ring_axioms(a in terms(), b in terms(), c in terms()) {
        let r = ring(7);
        let (a, b, c) = (poly(&r, &a), poly(&r, &b), poly(&r, &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn frobenius_is_pth_power(a in terms()) {
        let r = ring(5);
        let a = poly(&r, &a);
        prop_assert_eq!(a.frobenius_power().unwrap(), a.pow(5));
    }

    #[test]
    fn extension_frobenius_is_pth_power(a in terms()) {
        let f = build_extension(3, 2).unwrap();
        let r = PolyRing::new(f.clone(), &["x", "y"]).unwrap();
        let g = f.from_coords(&[1, 1]).unwrap();
        let a = poly(&ring(3), &a);
        let lifted = SparsePoly::from_terms(&r, a.terms().iter().map(|(m, c)| (*m, f.mul(&g, &f.from_u32(c.residue())))));
        prop_assert_eq!(lifted.frobenius_power().unwrap(), lifted.pow(3));
    }

    #[test]
    fn substitute_then_evaluate(a in terms(), b in terms(), x in 0u32..11, y in 0u32..11) {
        let r = ring(11);
        let f = RatFunc::from_poly(poly(&r, &a));
        let g = RatFunc::from_poly(poly(&r, &b));
        let k = r.coeffs();
        let pt = [k.from_u32(x), k.from_u32(y)];
        let composed = f.substitute(&[(0, g.clone())]).unwrap();
        let inner = g.evaluate(&pt).unwrap();
        prop_assert_eq!(composed.evaluate(&pt).unwrap(), f.evaluate(&[inner, pt[1]]).unwrap());
    }

    #[test]
    fn leibniz_rule(a in terms(), b in terms(), c in terms()) {
        let r = ring(13);
        let f = RatFunc::from_poly(poly(&r, &a));
        let den = poly(&r, &c);
        prop_assume!(!den.is_zero());
        let g = RatFunc::from_poly(poly(&r, &b)).div(&RatFunc::from_poly(den)).unwrap();
        let lhs = f.mul(&g).derivative(0);
        let rhs = f.derivative(0).mul(&g).add(&f.mul(&g.derivative(0)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_round_trip(a in terms(), b in terms()) {
        let r = ring(7);
        let f = RatFunc::from_poly(poly(&r, &a));
        let g = RatFunc::from_poly(poly(&r, &b));
        prop_assume!(!g.is_zero());
        prop_assert_eq!(f.mul(&g).div(&g).unwrap(), f);
    }

    #[test]
    fn display_parses_back(a in terms(), b in terms()) {
        let r = ring(7);
        let den = poly(&r, &b);
        prop_assume!(!den.is_zero());
        let f = RatFunc::from_poly(poly(&r, &a)).div(&RatFunc::from_poly(den)).unwrap();
        prop_assert_eq!(parse_ratfunc(&r, &f.to_string()).unwrap(), f);
    }

    #[test]
    fn recipe_decides_zero(a in terms(), b in terms()) {
        // a^p - frob(a) is zero; adding b makes it zero exactly when b is.
        let r = ring(5);
        let a = poly(&r, &a);
        let b = poly(&r, &b);
        let z = &a.pow(5) - &a.frobenius_power().unwrap();
        prop_assert!(recipe_prove_zero(&z, 0));
        prop_assert_eq!(recipe_prove_zero(&(&z + &b), 0), b.is_zero());
    }
}

#[test]
fn field_axioms_in_gf25() {
    let f = build_extension(5, 2).unwrap();
    let els: Vec<_> = f.elements().collect();
    assert_eq!(els.len(), 25);
    for a in &els {
        assert_eq!(f.pow(a, 25), *a);
        if !f.is_zero(a) {
            assert_eq!(f.mul(a, &f.inv(a).unwrap()), f.one());
        }
        for b in &els {
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.frobenius(&f.add(a, b)), f.add(&f.frobenius(a), &f.frobenius(b)));
        }
    }
}
