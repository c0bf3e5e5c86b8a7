//! Dense linear algebra over a prime field `F_p`, with entries as residues.

use serde::Serialize;

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "zero has no inverse mod {p}");
    let mut r = 1u32;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

/// `row -= f * other`, from column `start` on.
fn axpy(row: &mut [u32], f: u32, other: &[u32], start: usize, p: u32) {
    for (x, &y) in row[start..].iter_mut().zip(&other[start..]) {
        if y != 0 {
            *x = sub_mod(*x, mul_mod(f, y, p), p);
        }
    }
}

/// A matrix given by its rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matrix {
    pub p: u32,
    pub ncols: usize,
    pub rows: Vec<Vec<u32>>,
}

impl Matrix {
    pub fn new(p: u32, ncols: usize) -> Self {
        Matrix {
            p,
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::new(p, n);
        for i in 0..n {
            let mut r = vec![0; n];
            r[i] = 1;
            m.rows.push(r);
        }
        m
    }

    pub fn zero(p: u32, nrows: usize, ncols: usize) -> Self {
        Matrix {
            p,
            ncols,
            rows: vec![vec![0; ncols]; nrows],
        }
    }

    pub fn push_row(&mut self, row: Vec<u32>) {
        assert_eq!(row.len(), self.ncols, "row length");
        self.rows.push(row.into_iter().map(|x| x % self.p).collect());
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
}

/// Reduced row echelon form, grown one row at a time. Pivots are kept in
/// increasing column order and normalized to 1, so the state only depends
/// on the row space, not on the insertion order.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    ncols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u32, ncols: usize) -> Self {
        Echelon {
            p,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn reduce(&self, row: &mut [u32]) {
        for (r, &c) in self.rows.iter().zip(&self.pivots) {
            let f = row[c];
            if f != 0 {
                axpy(row, f, r, c, self.p);
            }
        }
    }

    /// Add a row to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut row: Vec<u32>) -> bool {
        assert_eq!(row.len(), self.ncols, "row length");
        let p = self.p;
        for x in row.iter_mut() {
            *x %= p;
        }
        self.reduce(&mut row);
        let Some(c) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv_mod(row[c], p);
        for x in row[c..].iter_mut() {
            *x = mul_mod(*x, s, p);
        }
        for r in self.rows.iter_mut() {
            let f = r[c];
            if f != 0 {
                axpy(r, f, &row, c, p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, row);
        true
    }

    pub fn contains(&self, row: &[u32]) -> bool {
        let mut r: Vec<u32> = row.iter().map(|x| x % self.p).collect();
        self.reduce(&mut r);
        r.iter().all(|&x| x == 0)
    }

    /// Whether `v` is orthogonal to every row, i.e. lies in the kernel.
    pub fn annihilates(&self, v: &[u32]) -> bool {
        self.rows.iter().all(|r| {
            r.iter()
                .zip(v)
                .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % self.p as u64)
                == 0
        })
    }

    /// Kernel basis: one vector per free column, with a 1 there and zeros
    /// in the other free columns.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivots.binary_search(&f).is_ok() {
                continue;
            }
            let mut v = vec![0u32; self.ncols];
            v[f] = 1;
            for (r, &c) in self.rows.iter().zip(&self.pivots) {
                v[c] = sub_mod(0, r[f], p);
            }
            out.push(v);
        }
        out
    }
}

/// Echelon form of the stacked matrices: its kernel is the intersection of
/// their kernels.
pub fn echelon_of(p: u32, ncols: usize, matrices: &[Matrix]) -> Echelon {
    let mut e = Echelon::new(p, ncols);
    for m in matrices {
        assert_eq!(m.ncols, ncols, "column count");
        for r in &m.rows {
            if e.is_full() {
                return e;
            }
            e.insert(r.clone());
        }
    }
    e
}

pub fn rank(m: &Matrix) -> usize {
    echelon_of(m.p, m.ncols, std::slice::from_ref(m)).rank()
}

pub fn kernel(m: &Matrix) -> Vec<Vec<u32>> {
    echelon_of(m.p, m.ncols, std::slice::from_ref(m)).kernel()
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Solution {
    /// A particular solution.
    Solved(Vec<u32>),
    /// `y` with `y A = 0` and `y b != 0`, proving inconsistency.
    Inconsistent(Vec<u32>),
}

/// Gaussian elimination on `[A | b]` tracking the row combinations, so an
/// inconsistent system comes with a certificate.
pub fn solve(a: &Matrix, b: &[u32]) -> Solution {
    let p = a.p;
    let (m, n) = (a.nrows(), a.ncols);
    assert_eq!(b.len(), m, "right-hand side length");
    // each row: [A_i | b_i | e_i]
    let width = n + 1 + m;
    let mut rows: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            let mut r = Vec::with_capacity(width);
            r.extend(a.rows[i].iter().map(|x| x % p));
            r.push(b[i] % p);
            r.extend((0..m).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..n {
        let Some(k) = (top..m).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(top, k);
        let s = inv_mod(rows[top][c], p);
        for x in rows[top].iter_mut() {
            *x = mul_mod(*x, s, p);
        }
        let pivot_row = rows[top].clone();
        for (k, r) in rows.iter_mut().enumerate() {
            if k != top && r[c] != 0 {
                let f = r[c];
                axpy(r, f, &pivot_row, 0, p);
            }
        }
        pivots.push(c);
        top += 1;
    }
    if let Some(r) = rows[top..].iter().find(|r| r[n] != 0) {
        return Solution::Inconsistent(r[n + 1..].to_vec());
    }
    let mut x = vec![0u32; n];
    for (r, &c) in rows.iter().zip(&pivots) {
        x[c] = r[n];
    }
    Solution::Solved(x)
}

/// `y A` for a row vector `y`.
pub fn left_mul(y: &[u32], a: &Matrix) -> Vec<u32> {
    let p = a.p as u64;
    let mut out = vec![0u64; a.ncols];
    for (&yi, r) in y.iter().zip(&a.rows) {
        if yi == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(r) {
            *o = (*o + yi as u64 * x as u64) % p;
        }
    }
    out.into_iter().map(|x| x as u32).collect()
}

/// `A x` for a column vector `x`.
pub fn apply(a: &Matrix, x: &[u32]) -> Vec<u32> {
    let p = a.p as u64;
    a.rows
        .iter()
        .map(|r| {
            (r.iter()
                .zip(x)
                .fold(0u64, |acc, (&u, &v)| (acc + u as u64 * v as u64) % p)) as u32
        })
        .collect()
}

pub fn dot(x: &[u32], y: &[u32], p: u32) -> u32 {
    x.iter()
        .zip(y)
        .fold(0u64, |acc, (&u, &v)| (acc + u as u64 * v as u64) % p as u64) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero() {
        assert!(kernel(&Matrix::identity(5, 4)).is_empty());
        assert_eq!(kernel(&Matrix::zero(5, 3, 5)).len(), 5);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let mut m = Matrix::new(7, 4);
        m.push_row(vec![1, 2, 3, 4]);
        m.push_row(vec![2, 4, 6, 2]);
        let k = kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&m, v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn inconsistent_system_has_certificate() {
        let mut a = Matrix::new(5, 2);
        a.push_row(vec![1, 1]);
        a.push_row(vec![2, 2]);
        let b = [1, 3];
        match solve(&a, &b) {
            Solution::Inconsistent(y) => {
                assert!(left_mul(&y, &a).iter().all(|&x| x == 0));
                assert_ne!(dot(&y, &b, 5), 0);
            }
            s => panic!("{s:?}"),
        }
        let b = [1, 2];
        match solve(&a, &b) {
            Solution::Solved(x) => assert_eq!(apply(&a, &x), vec![1, 2]),
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn insertion_order_does_not_matter() {
        let rows = [vec![1, 2, 0, 3], vec![0, 1, 1, 1], vec![1, 3, 1, 4]];
        let mut a = Echelon::new(11, 4);
        let mut b = Echelon::new(11, 4);
        for r in &rows {
            a.insert(r.clone());
        }
        for r in rows.iter().rev() {
            b.insert(r.clone());
        }
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.kernel(), b.kernel());
    }
}
