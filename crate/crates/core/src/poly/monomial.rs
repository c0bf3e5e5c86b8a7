use std::cmp::Ordering;

/// Maximum number of variables in one polynomial ring.
pub const MAX_VARS: usize = 8;

/// A power product `x_0^{e_0} ... x_7^{e_7}` over the registered variables of
/// a ring. The derived ordering is graded lexicographic with `x_0` the most
/// significant variable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: [u32; MAX_VARS],
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        deg: 0,
        exps: [0; MAX_VARS],
    };

    pub fn from_exponents(e: &[u32]) -> Self {
        assert!(e.len() <= MAX_VARS, "too many variables");
        let mut exps = [0; MAX_VARS];
        exps[..e.len()].copy_from_slice(e);
        Monomial {
            deg: e.iter().sum(),
            exps,
        }
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut exps = [0; MAX_VARS];
        exps[i] = e;
        Monomial { deg: e, exps }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn exponents(&self) -> &[u32; MAX_VARS] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps) {
            *e += o;
        }
        Monomial {
            deg: self.deg + other.deg,
            exps,
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps) {
            *e = e.checked_sub(o)?;
        }
        Some(Monomial {
            deg: self.deg - other.deg,
            exps,
        })
    }

    pub fn scale_exponents(&self, k: u32) -> Self {
        let mut exps = self.exps;
        for e in exps.iter_mut() {
            *e *= k;
        }
        Monomial {
            deg: self.deg * k,
            exps,
        }
    }

    pub fn with_exponent(&self, i: usize, e: u32) -> Self {
        let mut exps = self.exps;
        let old = exps[i];
        exps[i] = e;
        Monomial {
            deg: self.deg - old + e,
            exps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = Monomial::var(0, 1);
        let b = Monomial::var(1, 1);
        let b2 = Monomial::var(1, 2);
        assert!(a > b);
        assert!(b2 > a);
        assert!(a.mul(&b) > b2.with_exponent(1, 1));
        assert!(Monomial::ONE < b);
    }

    #[test]
    fn order_is_multiplicative() {
        let ms = [
            Monomial::from_exponents(&[2, 0, 1]),
            Monomial::from_exponents(&[1, 2, 0]),
            Monomial::from_exponents(&[0, 0, 3]),
            Monomial::from_exponents(&[1, 1, 1]),
        ];
        let w = Monomial::from_exponents(&[0, 3, 1]);
        for x in &ms {
            for y in &ms {
                assert_eq!(x.cmp(y), x.mul(&w).cmp(&y.mul(&w)));
            }
        }
    }
}
