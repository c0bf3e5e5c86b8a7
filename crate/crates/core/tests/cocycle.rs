use finpolylog_core::cocycle::{
    check_cocycle, check_cocycle_with, check_equation_b, check_equation_c, coboundary_solve, coboundary_solve_with,
    entropy_all_orderings, entropy_mod_p, group_check, group_check_with, group_inverse, group_mul, main_identity_check,
    phi, random_distribution, GroupCheckOptions, GroupElement, RationalDistribution, Tables,
};
use finpolylog_core::field::is_prime;
use finpolylog_core::{ExactRational, FieldDescriptor};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn primes(lo: u32, hi: u32) -> impl Iterator<Item = u32> {
    (lo..=hi).filter(|&p| is_prime(p as u64))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `((x+y)^p - x^p - y^p) / p mod p`, computed mod `p^2`.
fn phi_oracle(x: u32, y: u32, p: u32) -> u32 {
    let (p, m) = (p as u64, (p * p) as u64);
    let v = (pow_mod(x as u64 + y as u64, p, m) + 2 * m - pow_mod(x as u64, p, m) - pow_mod(y as u64, p, m)) % m;
    assert_eq!(v % p, 0);
    (v / p) as u32
}

/// `(1 - sum r_i^p) / p mod p` for representatives `r_i` of the
/// probabilities mod `p^2`.
fn entropy_oracle(d: &RationalDistribution, p: u32) -> u32 {
    let (pp, m) = (p as u64, (p * p) as u64);
    let mut s = 0u64;
    for q in d.probs() {
        let num = q.numer().to_string().parse::<i64>().unwrap().rem_euclid(m as i64) as u64;
        let den = q.denom().to_string().parse::<i64>().unwrap().rem_euclid(m as i64) as u64;
        let inv = pow_mod(den, pp * (pp - 1) - 1, m);
        s = (s + pow_mod(num * inv % m, pp, m)) % m;
    }
    let v = (1 + m - s) % m;
    assert_eq!(v % pp, 0);
    (v / pp) as u32
}

#[test]
fn phi_against_integer_oracle() {
    for p in primes(3, 31) {
        let t = Tables::new(p).unwrap();
        let f = FieldDescriptor::prime(p).unwrap();
        for x in 0..p {
            for y in 0..p {
                assert_eq!(t.phi(x, y), phi_oracle(x, y, p), "p={p} x={x} y={y}");
                let v = phi(&f.from_u32(x), &f.from_u32(y), &f).unwrap();
                assert_eq!(v.residue(), t.phi(x, y));
            }
        }
    }
}

#[test]
fn cocycle_symmetric_homogeneous() {
    for p in primes(3, 31) {
        let v = check_cocycle(p).unwrap();
        assert!(v.holds(), "p={p}");
        assert_eq!(v.cocycle.cases, (p as u64).pow(3));
    }
}

#[test]
fn phi_is_not_a_coboundary() {
    for p in primes(3, 31) {
        let r = coboundary_solve(p).unwrap();
        assert!(!r.is_coboundary, "p={p}");
        assert_eq!(r.certificate_valid, Some(true), "p={p}");
        assert!(r.psi.is_none());
    }
}

#[test]
fn a_genuine_coboundary_is_recognized() {
    // psi(x) = x^2 gives f(x,y) = -2xy
    let p = 11;
    let t = Tables::new(p).unwrap();
    let f = |x: u32, y: u32| t.sub(0, t.mul(2, t.mul(x, y)));
    let r = coboundary_solve_with(p, f).unwrap();
    assert!(r.is_coboundary);
    let psi = r.psi.unwrap();
    for x in 0..p {
        for y in 0..p {
            assert_eq!(
                t.sub(t.add(psi[x as usize], psi[y as usize]), psi[t.add(x, y) as usize]),
                f(x, y)
            );
        }
    }
    assert!(check_cocycle_with(p, f, 1 << 20).unwrap().cocycle.holds);
}

#[test]
fn non_cocycle_is_rejected() {
    let p = 7;
    let t = Tables::new(p).unwrap();
    let f = |x: u32, y: u32| t.mul(x, t.mul(y, y));
    let a = check_cocycle_with(p, f, 1 << 20).unwrap();
    let b = check_cocycle_with(p, f, 1 << 20).unwrap();
    assert!(!a.cocycle.holds);
    assert_eq!(a.cocycle.witness, b.cocycle.witness);
    let g = group_check_with(p, f, &GroupCheckOptions::default()).unwrap();
    assert!(!g.associativity.holds);
}

#[test]
fn group_axioms() {
    for p in [5, 7] {
        let v = group_check(p, &GroupCheckOptions::default()).unwrap();
        assert!(v.exhaustive && v.holds(), "p={p}");
        assert_eq!(v.order, (p as u64).pow(2) * (p as u64 - 1));
    }
    for p in [11, 13] {
        let opts = GroupCheckOptions {
            samples: 200_000,
            ..GroupCheckOptions::default()
        };
        let v = group_check(p, &opts).unwrap();
        assert!(v.holds(), "p={p}");
    }
    let t = Tables::new(7).unwrap();
    let g = GroupElement::from_index(7, 100);
    assert_eq!(group_mul(&t, g, group_inverse(&t, g)), GroupElement::identity());
}

#[test]
fn elementary_equations() {
    for p in primes(3, 31) {
        assert!(check_equation_b(p).unwrap().holds, "p={p}");
        assert!(check_equation_c(p).unwrap().holds, "p={p}");
    }
}

#[test]
fn entropy_examples() {
    let d = RationalDistribution::parse("1/2,1/2").unwrap();
    for p in [5, 7, 11] {
        assert_eq!(entropy_mod_p(&d, p).unwrap().value, entropy_oracle(&d, p));
    }
    assert!(RationalDistribution::parse("1/2,1/3").is_err());
    assert!(RationalDistribution::parse("3/2,-1/2").is_err());
    // denominator divisible by p
    let d = RationalDistribution::parse("1/5,4/5").unwrap();
    assert!(entropy_mod_p(&d, 5).is_err());
    // a certain outcome carries no information
    let d = RationalDistribution::parse("0,1,0").unwrap();
    assert_eq!(entropy_mod_p(&d, 7).unwrap().value, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn entropy_is_order_independent(seed in any::<u64>(), k in 2usize..=6, pi in 0usize..3) {
        let p = [5, 7, 11][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_distribution(&mut rng, k, p);
        let values = entropy_all_orderings(&d, p).unwrap();
        if let Some(&first) = values.first() {
            prop_assert!(values.iter().all(|&v| v == first));
            prop_assert_eq!(first, entropy_oracle(&d, p));
            prop_assert_eq!(entropy_mod_p(&d, p).unwrap().value, first);
        }
    }
}

fn refinement(rng: &mut ChaCha8Rng, p: u32) -> Option<Vec<Vec<ExactRational>>> {
    use rand::Rng;
    let k = rng.gen_range(2..=4);
    let coarse = random_distribution(rng, k, p);
    let mut groups = Vec::new();
    for q in coarse.probs() {
        let k = rng.gen_range(1..=3);
        let fine = random_distribution(rng, k, p);
        groups.push(fine.probs().iter().map(|x| x * q).collect());
    }
    let check = main_identity_check(&groups, p);
    check.is_ok().then_some(groups)
}

#[test]
fn entropy_chain_rule_on_random_refinements() {
    for p in [5, 7, 11, 13] {
        let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
        let mut done = 0;
        while done < 100 {
            let Some(groups) = refinement(&mut rng, p) else {
                continue;
            };
            let v = main_identity_check(&groups, p).unwrap();
            assert!(v.holds, "p={p} {groups:?}");
            done += 1;
        }
    }
}
