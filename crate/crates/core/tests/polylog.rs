use finpolylog_core::eqcat::{build, Params};
use finpolylog_core::field::is_prime;
use finpolylog_core::finlog::{apply_polynomial, l1_via_witt, special_values, tau_coefficients, RowStatus};
use finpolylog_core::linalg::Echelon;
use finpolylog_core::{finite_polylog, parse_ratfunc, FieldDescriptor, PolyRing, RatFunc, SparsePoly};

fn primes(lo: u32, hi: u32) -> impl Iterator<Item = u32> {
    (lo..=hi).filter(|&p| is_prime(p as u64))
}

#[test]
fn t_derivative_lowers_weight() {
    for p in primes(3, 31) {
        for n in -3..=(p as i64 + 1) {
            let l = finite_polylog(n, p).unwrap();
            let prev = finite_polylog(n - 1, p).unwrap();
            let poly = l.to_poly();
            let t = SparsePoly::var(poly.ring(), 0);
            assert_eq!(&t * &poly.derivative(0), prev.to_poly(), "p={p} n={n}");
        }
    }
}

#[test]
fn weight_zero_reflection() {
    // T L_0(1-T) = -(1-T) L_0(T)
    for p in primes(3, 31) {
        let l0 = finite_polylog(0, p).unwrap();
        let ring = PolyRing::new(l0.field().clone(), &["T"]).unwrap();
        let f = RatFunc::from_poly(l0.poly(&ring, 0));
        let t = RatFunc::var(&ring, 0);
        let omt = parse_ratfunc(&ring, "1-T").unwrap();
        let lhs = t.mul(&f.substitute(&[(0, omt.clone())]).unwrap());
        assert_eq!(lhs, omt.mul(&f).neg(), "p={p}");
    }
}

#[test]
fn witt_form_matches_l1() {
    for p in primes(3, 31) {
        assert_eq!(
            l1_via_witt(p).unwrap(),
            finite_polylog(1, p).unwrap().to_poly(),
            "p={p}"
        );
    }
}

#[test]
fn functions_are_not_identically_zero() {
    for p in primes(3, 31) {
        for n in 1..=3 {
            let l = finite_polylog(n, p).unwrap();
            assert!(l.value_table().iter().any(|v| v.residue() != 0), "p={p} n={n}");
        }
    }
}

#[test]
fn weight_one_values_against_harmonic_sums() {
    // L_1(x) = sum x^k / k computed independently with integer arithmetic
    for p in primes(3, 31) {
        let l = finite_polylog(1, p).unwrap();
        let f = l.field().clone();
        for x in 0..p as u64 {
            let mut acc = 0u64;
            let mut xk = 1u64;
            for k in 1..p as u64 {
                xk = xk * x % p as u64;
                let inv = (1..p as u64).find(|i| i * k % p as u64 == 1).unwrap();
                acc = (acc + xk * inv) % p as u64;
            }
            assert_eq!(l.eval(&f.from_u32(x as u32)).residue() as u64, acc);
        }
    }
}

#[test]
fn tau_family_solves_three_term_and_is_free() {
    for p in primes(5, 31) {
        let field = FieldDescriptor::prime(p).unwrap();
        let three = build(&field, "three_term", &Params::default()).unwrap();
        let mut e = Echelon::new(p, p as usize + 1);
        for i in 0..=(p - 1) / 3 {
            let t = tau_coefficients(i, &field).unwrap();
            assert!(apply_polynomial(&t, &three).unwrap().is_zero(), "p={p} i={i}");
            e.insert(t.iter().map(|c| c.residue()).collect());
        }
        assert_eq!(e.rank() as u32, (p - 1) / 3 + 1, "p={p}");
    }
}

#[test]
fn special_value_table_to_101() {
    for p in primes(5, 101) {
        let rows = special_values(p).unwrap();
        assert!(rows.iter().all(|r| r.status != RowStatus::Fail), "p={p}");
        let logged: Vec<_> = rows.iter().filter(|r| r.status == RowStatus::Logged).collect();
        assert_eq!(logged.len(), 1);
        assert_eq!(logged[0].n_or_m, "m=1");
    }
}

#[test]
fn value_at_one_direct() {
    // L_n(1) = sum 1/k^n is -1 when (p-1) | n and 0 otherwise
    let l = finite_polylog(4, 5).unwrap();
    assert_eq!(l.eval(&l.field().one()).residue(), 4);
    let l = finite_polylog(2, 5).unwrap();
    assert_eq!(l.eval(&l.field().one()).residue(), 0);
}
