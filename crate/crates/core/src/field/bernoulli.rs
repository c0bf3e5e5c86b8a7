use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{ExactRational, FieldDescriptor, FieldElement};
use crate::error::{Error, Result};

fn cache() -> &'static Mutex<Vec<ExactRational>> {
    static CACHE: OnceLock<Mutex<Vec<ExactRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![ExactRational::one()]))
}

/// The Bernoulli number `B_j` with `B_1 = -1/2`, from
/// `sum_{k<=m} C(m+1, k) B_k = 0`. Results are memoized process-wide.
pub fn exact_bernoulli(j: usize) -> ExactRational {
    let mut table = cache().lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= j {
        let m = table.len();
        // C(m+1, k) for k = 0..m, built incrementally.
        let mut binom = BigInt::one();
        let mut acc = ExactRational::zero();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += ExactRational::from_integer(binom.clone()) * b;
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        // binom is now C(m+1, m) = m+1.
        table.push(-acc / ExactRational::from_integer(binom));
    }
    table[j].clone()
}

/// Genocchi number `G_j = 2(1 - 2^j) B_j`, checked to be an integer.
pub fn genocchi(j: usize) -> Result<BigInt> {
    if j == 0 {
        return Err(Error::BadParams("Genocchi index starts at 1".into()));
    }
    let factor = BigInt::from(2) * (BigInt::one() - (BigInt::one() << j));
    let g = exact_bernoulli(j) * ExactRational::from_integer(factor);
    if !g.is_integer() {
        return Err(Error::NonIntegral(j));
    }
    Ok(g.to_integer())
}

/// Reduce a rational into a field of characteristic `p`; `None` when `p`
/// divides the denominator.
pub fn reduce_rational(r: &ExactRational, field: &FieldDescriptor) -> Option<FieldElement> {
    let p = BigInt::from(field.characteristic());
    let den = r.denom().mod_floor(&p);
    if den.is_zero() {
        return None;
    }
    let num = r.numer().mod_floor(&p);
    let n = field.from_u32(num.to_u32().expect("residue fits"));
    let d = field.from_u32(den.to_u32().expect("residue fits"));
    Some(field.mul(&n, &field.inv(&d).ok()?))
}

/// `B_j mod p`, failing at the von Staudt-Clausen poles `(p-1) | j, j > 0`.
pub fn bernoulli_mod_p(j: usize, field: &FieldDescriptor) -> Result<FieldElement> {
    let p = field.characteristic();
    if j > 0 && j.is_multiple_of(p as usize - 1) {
        return Err(Error::StaudtClausenPole { index: j, p });
    }
    let b = exact_bernoulli(j);
    reduce_rational(&b, field).ok_or(Error::StaudtClausenPole { index: j, p })
}

/// Residue of a big integer in the prime subfield.
pub fn reduce_integer(n: &BigInt, field: &FieldDescriptor) -> FieldElement {
    let p = BigInt::from(field.characteristic());
    field.from_u32(n.mod_floor(&p).to_u32().expect("residue fits"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::is_prime;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n.into(), d.into())
    }

    #[test]
    fn first_bernoulli_numbers() {
        assert_eq!(exact_bernoulli(0), q(1, 1));
        assert_eq!(exact_bernoulli(1), q(-1, 2));
        assert_eq!(exact_bernoulli(2), q(1, 6));
        assert_eq!(exact_bernoulli(3), q(0, 1));
        assert_eq!(exact_bernoulli(4), q(-1, 30));
        assert_eq!(exact_bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn genocchi_small() {
        assert_eq!(genocchi(1).unwrap(), BigInt::from(1));
        assert_eq!(genocchi(2).unwrap(), BigInt::from(-1));
        assert_eq!(genocchi(3).unwrap(), BigInt::from(0));
        assert_eq!(genocchi(4).unwrap(), BigInt::from(1));
        assert_eq!(genocchi(6).unwrap(), BigInt::from(-3));
        assert_eq!(genocchi(8).unwrap(), BigInt::from(17));
        for k in 1..=15 {
            assert!(genocchi(2 * k + 1).unwrap().is_zero());
        }
    }

    #[test]
    fn bernoulli_mod_five() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        assert_eq!(bernoulli_mod_p(2, &f5).unwrap(), f5.from_u32(1));
        assert_eq!(bernoulli_mod_p(1, &f5).unwrap(), f5.from_u32(2));
        assert_eq!(
            bernoulli_mod_p(4, &f5),
            Err(Error::StaudtClausenPole { index: 4, p: 5 })
        );
    }

    #[test]
    fn staudt_clausen_denominators() {
        for k in 1..=15usize {
            let den = exact_bernoulli(2 * k).denom().clone();
            let expected: BigInt = (2..=2 * k as u64 + 1)
                .filter(|&l| is_prime(l) && (2 * k as u64).is_multiple_of(l - 1))
                .map(BigInt::from)
                .product();
            assert_eq!(den, expected, "denominator of B_{}", 2 * k);
        }
    }

    #[test]
    fn kummer_congruence_for_genocchi() {
        for p in (3u32..50).filter(|&p| is_prime(p as u64)) {
            let f = FieldDescriptor::prime(p).unwrap();
            for m in 1..=10usize {
                let lhs = reduce_integer(&(BigInt::from(m) * genocchi(p as usize - 1 + m).unwrap()), &f);
                let rhs = reduce_integer(&(BigInt::from(m as i64 - 1) * genocchi(m).unwrap()), &f);
                assert_eq!(lhs, rhs, "p = {p}, m = {m}");
            }
        }
    }
}
