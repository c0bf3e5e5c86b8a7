//! Evaluation of `L^_m(S)` at many points through discrete-log tables.
//!
//! Elements are stored as exponents of a primitive element `g`, with
//! [`ZERO`] for `0`; addition goes through the Zech table
//! `zech[k] = log(1 + g^k)`.

use std::collections::BTreeMap;

use super::formal_sum::FormalSum;
use crate::field::{FieldDescriptor, FieldElement};
use crate::poly::{RatFunc, SparsePoly};

const ZERO: u32 = u32::MAX;

/// Largest field order the tables are built for.
pub(crate) const MAX_TABLE_ORDER: u64 = 1 << 22;

pub(crate) struct LogField {
    n: u64,
    p: u64,
    log_of_index: Vec<u32>,
    zech: Vec<u32>,
}

impl LogField {
    pub(crate) fn new(field: &FieldDescriptor) -> Self {
        let q = field.order();
        let n = q - 1;
        let g = field.primitive_element();
        let mut log_of_index = vec![ZERO; q as usize];
        let mut x = field.one();
        let mut index_of_log = vec![0u64; n as usize];
        for k in 0..n {
            let i = field.index_of(&x);
            log_of_index[i as usize] = k as u32;
            index_of_log[k as usize] = i;
            x = field.mul(&x, &g);
        }
        let one = field.one();
        let zech = (0..n)
            .map(|k| {
                let y = field.add(&one, &field.element(index_of_log[k as usize]));
                log_of_index[field.index_of(&y) as usize]
            })
            .collect();
        LogField {
            n,
            p: field.characteristic() as u64,
            log_of_index,
            zech,
        }
    }

    pub(crate) fn log(&self, index: u64) -> u32 {
        self.log_of_index[index as usize]
    }

    fn of(&self, field: &FieldDescriptor, x: &FieldElement) -> u32 {
        self.log(field.index_of(x))
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        let d = (b as u64 + self.n - a as u64) % self.n;
        match self.zech[d as usize] {
            ZERO => ZERO,
            z => ((a as u64 + z as u64) % self.n) as u32,
        }
    }

    /// `a * b^e`, with `e` possibly negative; `b` must be nonzero.
    fn mul_pow(&self, a: u32, b: u32, e: i64) -> u32 {
        if a == ZERO {
            return ZERO;
        }
        let s = (b as i64 * e).rem_euclid(self.n as i64) as u64;
        ((a as u64 + s) % self.n) as u32
    }
}

struct CompiledPoly {
    /// `(log c, exponents)`.
    terms: Vec<(u32, Vec<u32>)>,
}

impl CompiledPoly {
    fn eval(&self, lf: &LogField, pt: &[u32]) -> u32 {
        let mut acc = ZERO;
        'term: for (c, exps) in &self.terms {
            let mut t = *c;
            for (&x, &e) in pt.iter().zip(exps) {
                if e == 0 {
                    continue;
                }
                if x == ZERO {
                    continue 'term;
                }
                t = lf.mul_pow(t, x, e as i64);
            }
            acc = lf.add(acc, t);
        }
        acc
    }
}

/// A rational function as `unit * prod f_i^{e_i}`, with `e_i < 0` for
/// denominator factors; factors index into the shared factor list.
struct CompiledRat {
    unit: u32,
    factors: Vec<(usize, i64)>,
}

pub(crate) struct CompiledSum {
    factors: Vec<CompiledPoly>,
    terms: Vec<(CompiledRat, CompiledRat)>,
    /// `L_m` indexed by log, and its value at `0`.
    table: Vec<u32>,
    at_zero: u32,
}

impl CompiledSum {
    pub(crate) fn new(sum: &FormalSum<FieldDescriptor>, lf: &LogField, values: &[FieldElement]) -> Self {
        let field = sum.ring().coeffs().clone();
        let nvars = sum.ring().nvars();
        let mut ids: BTreeMap<SparsePoly<FieldDescriptor>, usize> = BTreeMap::new();
        let mut factors = Vec::new();
        let mut compile = |r: &RatFunc<FieldDescriptor>| -> CompiledRat {
            let mut fs = Vec::new();
            let parts = r
                .num_factors()
                .iter()
                .map(|(f, &e)| (f, e as i64))
                .chain(r.den_factors().iter().map(|(f, &e)| (f, -(e as i64))));
            for (f, e) in parts {
                let id = *ids.entry(f.clone()).or_insert_with(|| {
                    factors.push(CompiledPoly {
                        terms: f
                            .terms()
                            .iter()
                            .map(|(m, c)| (lf.of(&field, c), m.exponents()[..nvars].to_vec()))
                            .collect(),
                    });
                    factors.len() - 1
                });
                fs.push((id, e));
            }
            CompiledRat {
                unit: lf.of(&field, r.unit()),
                factors: fs,
            }
        };
        let terms = sum
            .terms()
            .iter()
            .map(|t| (compile(&t.coeff), compile(&t.arg)))
            .collect();
        let mut table = vec![ZERO; lf.n as usize];
        let mut at_zero = ZERO;
        for (i, v) in values.iter().enumerate() {
            let l = lf.of(&field, v);
            match lf.log(i as u64) {
                ZERO => at_zero = l,
                k => table[k as usize] = l,
            }
        }
        CompiledSum {
            factors,
            terms,
            table,
            at_zero,
        }
    }

    fn rat(&self, r: &CompiledRat, vals: &[u32], lf: &LogField) -> Option<u32> {
        let mut acc = r.unit;
        for &(id, e) in &r.factors {
            let v = vals[id];
            if v == ZERO {
                if e < 0 {
                    return None;
                }
                acc = ZERO;
            } else {
                acc = lf.mul_pow(acc, v, e);
            }
        }
        Some(acc)
    }

    /// `Some(true)` when `L^_m(S)` vanishes at the point (given by logs),
    /// `None` when the point is not admissible.
    pub(crate) fn vanishes(&self, lf: &LogField, pt: &[u32], scratch: &mut Vec<u32>) -> Option<bool> {
        scratch.clear();
        scratch.extend(self.factors.iter().map(|f| f.eval(lf, pt)));
        let mut acc = ZERO;
        for (c, x) in &self.terms {
            let c = self.rat(c, scratch, lf)?;
            let x = self.rat(x, scratch, lf)?;
            if c == ZERO {
                continue;
            }
            let l = match x {
                ZERO => self.at_zero,
                k => self.table[k as usize],
            };
            if l != ZERO {
                let cp = ((c as u64 * lf.p) % lf.n) as u32;
                acc = lf.add(acc, lf.mul_pow(l, cp, 1));
            }
        }
        Some(acc == ZERO)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqcat::{build, lift_to_extension, Params};
    use crate::field::build_extension;
    use crate::finlog::FinitePolylog;
    use crate::poly::parse_ratfunc;

    #[test]
    fn agrees_with_generic_evaluation() {
        let f = FieldDescriptor::prime(5).unwrap();
        let mut s = build(&f, "kummer_spence", &Params::default()).unwrap();
        let ring = s.ring().clone();
        // break the identity so that both outcomes occur
        s.push(
            parse_ratfunc(&ring, "x+y").unwrap(),
            parse_ratfunc(&ring, "x/(1-y)").unwrap(),
        );
        let f2 = build_extension(5, 2).unwrap();
        let s = lift_to_extension(&s, &f2).unwrap();
        let values = FinitePolylog::over(2, &f2).unwrap().value_table();
        let lf = LogField::new(&f2);
        let cs = CompiledSum::new(&s, &lf, &values);
        let mut seen = [0; 3];
        for a in f2.elements() {
            for b in f2.elements() {
                let pt = [a, b];
                let generic = s.terms().iter().try_fold(f2.zero(), |acc, t| {
                    let c = t.coeff.evaluate(&pt).ok()?;
                    let x = t.arg.evaluate(&pt).ok()?;
                    let l = values[f2.index_of(&x) as usize];
                    Some(f2.add(&acc, &f2.mul(&f2.frobenius(&c), &l)))
                });
                let logs = [lf.log(f2.index_of(&a)), lf.log(f2.index_of(&b))];
                let fast = cs.vanishes(&lf, &logs, &mut Vec::new());
                assert_eq!(fast, generic.map(|v| f2.is_zero(&v)));
                seen[match fast {
                    None => 0,
                    Some(true) => 1,
                    Some(false) => 2,
                }] += 1;
            }
        }
        assert!(seen.iter().all(|&n| n > 0), "{seen:?}");
    }
}
