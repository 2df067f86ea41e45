//! Exact rational dense linear algebra.
//!
//! Everything downstream (polytope builders, the simplex solver, the
//! decision pipelines) works over arbitrary-precision rationals; no
//! floating point appears anywhere in this crate. The shifts used by the
//! subgraph test grow like 2^(n^2), which no float format survives.

use std::fmt;
use std::ops::Index;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational scalar. Always kept in lowest terms with a
/// positive denominator by `num`.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Rational `p/q`. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Default cap for permutation enumeration (10! is ~3.6M images).
pub const PERMUTATION_ENUM_CAP: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatMatError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid permutation image {0:?}: not a bijection")]
    InvalidPermutation(Vec<usize>),
    #[error("permutation enumeration for n={n} exceeds cap {cap}")]
    EnumCapExceeded { n: usize, cap: usize },
}

// ---------------------------------------------------------------------------
// RatMatrix
// ---------------------------------------------------------------------------

/// Dense row-major matrix of rationals. Equality is entrywise exact equality.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Matrix with every entry equal to `v`.
    pub fn filled(rows: usize, cols: usize, v: Rat) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![v; rows * cols],
        }
    }

    /// The barycenter of the Birkhoff polytope: every entry 1/n.
    pub fn uniform_doubly_stochastic(n: usize) -> Self {
        Self::filled(n, n, frac(1, n as i64))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, RatMatError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(RatMatError::DimensionMismatch(
                "ragged row lengths".into(),
            ));
        }
        Ok(RatMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from integer literals, mostly for tests and
    /// file loading.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        RatMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.iter().flatten().map(|&v| rat(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] = v;
    }

    /// Row-major entry slice; for an mn x mn matrix this is exactly the
    /// variable order used by the constraint systems.
    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self, RatMatError> {
        self.same_shape(other)?;
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, s: &Rat) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    /// `self + t*I`; the shifted matrices A + tI of the similarity test.
    pub fn add_scaled_identity(&self, t: &Rat) -> Result<Self, RatMatError> {
        self.require_square()?;
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i) + t;
            out.set(i, i, v);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RatMatError> {
        if self.cols != other.rows {
            return Err(RatMatError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c) + &(a * b);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product in block form: block (i,j) of the result is
    /// `a_ij * B`, with the double index (i,k) flattened to i*n + k.
    /// Both factors must be square.
    pub fn kron(&self, other: &Self) -> Result<Self, RatMatError> {
        self.require_square()?;
        other.require_square()?;
        let m = self.rows;
        let n = other.rows;
        let mut out = Self::zeros(m * n, m * n);
        for i in 0..m {
            for j in 0..m {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        let b = other.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * n + k, j * n + l, a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Column-stacking operator: the columns of the matrix, first column
    /// first, as a single vector of length rows*cols.
    pub fn vec(&self) -> RatVec {
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        RatVec { entries }
    }

    /// Standard inner product tr(A B^T) = sum of entrywise products.
    pub fn trace_inner(&self, other: &Self) -> Result<Rat, RatMatError> {
        self.same_shape(other)?;
        let mut acc = Rat::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<Rat, RatMatError> {
        self.require_square()?;
        let mut acc = Rat::zero();
        for i in 0..self.rows {
            acc += self.get(i, i);
        }
        Ok(acc)
    }

    pub fn is_nonneg(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    pub fn is_zero_one(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero() || e.is_one())
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                if self.get(r, c) != self.get(c, r) {
                    return false;
                }
            }
        }
        true
    }

    pub fn has_zero_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| self.get(i, i).is_zero())
    }

    pub fn row_sum(&self, r: usize) -> Rat {
        (0..self.cols).map(|c| self.get(r, c)).sum()
    }

    pub fn col_sum(&self, c: usize) -> Rat {
        (0..self.rows).map(|r| self.get(r, c)).sum()
    }

    /// Nonnegative with all row and column sums equal to one.
    pub fn is_doubly_stochastic(&self) -> bool {
        if !self.is_square() || !self.is_nonneg() {
            return false;
        }
        (0..self.rows).all(|i| self.row_sum(i).is_one() && self.col_sum(i).is_one())
    }

    /// Entrywise `self <= other`.
    pub fn entrywise_le(&self, other: &Self) -> Result<bool, RatMatError> {
        self.same_shape(other)?;
        Ok(self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b))
    }

    fn same_shape(&self, other: &Self) -> Result<(), RatMatError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(RatMatError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn require_square(&self) -> Result<(), RatMatError> {
        if !self.is_square() {
            return Err(RatMatError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        self.get(r, c)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// RatVec
// ---------------------------------------------------------------------------

/// Column vector of rationals, produced by the vec operator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatVec {
    entries: Vec<Rat>,
}

impl RatVec {
    pub fn from_entries(entries: Vec<Rat>) -> Self {
        RatVec { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.entries[i]
    }

    pub fn dot(&self, other: &Self) -> Result<Rat, RatMatError> {
        if self.len() != other.len() {
            return Err(RatMatError::DimensionMismatch(format!(
                "vector lengths {} vs {}",
                self.len(),
                other.len()
            )));
        }
        let mut acc = Rat::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        Ok(acc)
    }

    /// Matrix-vector product `M * self`.
    pub fn apply(&self, m: &RatMatrix) -> Result<RatVec, RatMatError> {
        if m.cols() != self.len() {
            return Err(RatMatError::DimensionMismatch(format!(
                "{}x{} * vector of length {}",
                m.rows(),
                m.cols(),
                self.len()
            )));
        }
        let mut entries = Vec::with_capacity(m.rows());
        for r in 0..m.rows() {
            let mut acc = Rat::zero();
            for c in 0..m.cols() {
                let a = m.get(r, c);
                if !a.is_zero() {
                    acc += a * &self.entries[c];
                }
            }
            entries.push(acc);
        }
        Ok(RatVec { entries })
    }
}

// ---------------------------------------------------------------------------
// Permutation
// ---------------------------------------------------------------------------

/// Bijection of {0..n-1}. The matrix view M satisfies M[image[j]][j] = 1,
/// i.e. M * e_j = e_image[j], so conjugating by M moves row/column i of a
/// matrix to row/column image[i].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self, RatMatError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(RatMatError::InvalidPermutation(image));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    /// Builds the cyclic permutation that maps each element of `visits` to
    /// the next one (wrapping around). `visits` must list every element of
    /// {0..n-1} exactly once.
    pub fn from_cycle_visits(visits: &[usize]) -> Result<Self, RatMatError> {
        let n = visits.len();
        let mut image = vec![usize::MAX; n];
        for (t, &v) in visits.iter().enumerate() {
            if v >= n || image[v] != usize::MAX {
                return Err(RatMatError::InvalidPermutation(visits.to_vec()));
            }
            image[v] = visits[(t + 1) % n];
        }
        Permutation::from_image(image)
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v] = i;
        }
        Permutation { image }
    }

    /// Function composition: `(self.compose(q)).apply(i) = self.apply(q.apply(i))`.
    /// Matrix views multiply the same way.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        Permutation {
            image: other.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Permutation::identity(self.n());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// 0/1 matrix view under the fixed convention M[image[j]][j] = 1.
    pub fn matrix_view(&self) -> RatMatrix {
        let n = self.n();
        let mut m = RatMatrix::zeros(n, n);
        for j in 0..n {
            m.set(self.image[j], j, Rat::one());
        }
        m
    }

    /// The permutation whose matrix view is `matrix_view(self) (x) matrix_view(other)`:
    /// the double index (j,l) maps to (image_p[j], image_q[l]).
    pub fn kron(&self, other: &Self) -> Permutation {
        let m = self.n();
        let n = other.n();
        let mut image = vec![0; m * n];
        for j in 0..m {
            for l in 0..n {
                image[j * n + l] = self.image[j] * n + other.image[l];
            }
        }
        Permutation { image }
    }

    /// Cyclic in the sense used for the Rosenberg construction: the powers
    /// P^1, ..., P^n sum to the all-ones matrix.
    pub fn is_cyclic(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut hits = vec![false; n * n];
        let mut p = self.clone();
        for _ in 0..n {
            for j in 0..n {
                let cell = p.image[j] * n + j;
                if hits[cell] {
                    return false;
                }
                hits[cell] = true;
            }
            p = self.compose(&p);
        }
        hits.iter().all(|&h| h)
    }
}

/// `P A P^T` computed by index permutation, without materializing the 0/1
/// matrix: entry (r,c) of the result is A[p^-1(r)][p^-1(c)].
pub fn apply_similarity(p: &Permutation, a: &RatMatrix) -> Result<RatMatrix, RatMatError> {
    if !a.is_square() {
        return Err(RatMatError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if p.n() != a.rows() {
        return Err(RatMatError::DimensionMismatch(format!(
            "permutation on {} symbols vs {}x{} matrix",
            p.n(),
            a.rows(),
            a.cols()
        )));
    }
    let inv = p.inverse();
    Ok(RatMatrix::from_fn(a.rows(), a.cols(), |r, c| {
        a.get(inv.apply(r), inv.apply(c)).clone()
    }))
}

/// `P A Q^T` by index permutation; A is n x m, P acts on rows, Q on columns.
pub fn apply_equivalence(
    p: &Permutation,
    q: &Permutation,
    a: &RatMatrix,
) -> Result<RatMatrix, RatMatError> {
    if p.n() != a.rows() || q.n() != a.cols() {
        return Err(RatMatError::DimensionMismatch(format!(
            "permutations on ({},{}) symbols vs {}x{} matrix",
            p.n(),
            q.n(),
            a.rows(),
            a.cols()
        )));
    }
    let pinv = p.inverse();
    let qinv = q.inverse();
    Ok(RatMatrix::from_fn(a.rows(), a.cols(), |r, c| {
        a.get(pinv.apply(r), qinv.apply(c)).clone()
    }))
}

/// All n! permutations in lexicographic order of their image arrays.
/// Guarded because the count explodes; callers that need more than the
/// default cap must say so explicitly.
pub fn enumerate_permutations(n: usize) -> Result<Permutations, RatMatError> {
    enumerate_permutations_capped(n, PERMUTATION_ENUM_CAP)
}

pub fn enumerate_permutations_capped(n: usize, cap: usize) -> Result<Permutations, RatMatError> {
    if n == 0 {
        return Err(RatMatError::InvalidPermutation(vec![]));
    }
    if n > cap {
        return Err(RatMatError::EnumCapExceeded { n, cap });
    }
    Ok(Permutations {
        next: Some((0..n).collect()),
    })
}

/// Lazy lexicographic permutation stream.
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        self.next = next_lex(&mut succ).then_some(succ);
        Some(Permutation { image: current })
    }
}

// Classic in-place next-permutation step; false once `a` is the last one.
fn next_lex(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap2() -> Permutation {
        Permutation::from_image(vec![1, 0]).unwrap()
    }

    #[test]
    fn kron_identity_cases() {
        let i2 = RatMatrix::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), RatMatrix::identity(4));

        let x = RatMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]);
        let got = x.kron(&i2).unwrap();
        let want = RatMatrix::from_int_rows(&[
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn kron_rejects_non_square() {
        let a = RatMatrix::zeros(2, 3);
        let b = RatMatrix::identity(2);
        assert!(matches!(a.kron(&b), Err(RatMatError::NotSquare { .. })));
        assert!(matches!(b.kron(&a), Err(RatMatError::NotSquare { .. })));
    }

    #[test]
    fn vec_stacks_columns() {
        let x = RatMatrix::from_int_rows(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(
            x.vec().entries(),
            &[rat(1), rat(3), rat(2), rat(4)]
        );
        assert_eq!(RatMatrix::zeros(3, 2).vec().entries(), &vec![rat(0); 6][..]);
    }

    #[test]
    fn trace_inner_examples() {
        let i3 = RatMatrix::identity(3);
        assert_eq!(i3.trace_inner(&i3).unwrap(), rat(3));
        let a = RatMatrix::from_int_rows(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(a.trace_inner(&a).unwrap(), rat(30));
    }

    #[test]
    fn permutation_matrix_convention() {
        // image[0]=1: column 0 has its 1 in row 1.
        let p = swap2();
        let m = p.matrix_view();
        assert_eq!(*m.get(1, 0), rat(1));
        assert_eq!(*m.get(0, 1), rat(1));
        assert!(m.is_doubly_stochastic());
    }

    #[test]
    fn apply_similarity_matches_matrix_product() {
        let p = Permutation::from_image(vec![2, 0, 1]).unwrap();
        let a = RatMatrix::from_int_rows(&[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]);
        let fast = apply_similarity(&p, &a).unwrap();
        let m = p.matrix_view();
        let slow = m.mul(&a).unwrap().mul(&m.transpose()).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn apply_similarity_transposition_example() {
        let p = swap2();
        let a = RatMatrix::from_int_rows(&[vec![0, 1], vec![0, 0]]);
        let want = RatMatrix::from_int_rows(&[vec![0, 0], vec![1, 0]]);
        assert_eq!(apply_similarity(&p, &a).unwrap(), want);
    }

    #[test]
    fn apply_similarity_inverse_round_trip() {
        let p = Permutation::from_image(vec![3, 1, 0, 2]).unwrap();
        let a = RatMatrix::from_int_rows(&[
            vec![1, 2, 3, 4],
            vec![5, 6, 7, 8],
            vec![9, 10, 11, 12],
            vec![13, 14, 15, 16],
        ]);
        let there = apply_similarity(&p.inverse(), &a).unwrap();
        let back = apply_similarity(&p, &there).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn enumerate_permutations_counts_and_order() {
        assert_eq!(enumerate_permutations(1).unwrap().count(), 1);
        assert_eq!(enumerate_permutations(3).unwrap().count(), 6);
        let all: Vec<_> = enumerate_permutations(4).unwrap().collect();
        assert_eq!(all.len(), 24);
        // lexicographic and all distinct bijections
        for w in all.windows(2) {
            assert!(w[0].image() < w[1].image());
        }
        for p in &all {
            assert!(Permutation::from_image(p.image().to_vec()).is_ok());
        }
        assert!(matches!(
            enumerate_permutations_capped(5, 4),
            Err(RatMatError::EnumCapExceeded { .. })
        ));
    }

    #[test]
    fn compose_matches_matrix_multiplication() {
        let p = Permutation::from_image(vec![1, 2, 0]).unwrap();
        let q = Permutation::from_image(vec![0, 2, 1]).unwrap();
        let lhs = p.compose(&q).matrix_view();
        let rhs = p.matrix_view().mul(&q.matrix_view()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn kron_of_permutations_is_permutation_matrix() {
        for p in enumerate_permutations(2).unwrap() {
            for q in enumerate_permutations(3).unwrap() {
                let k = p.kron(&q);
                let km = k.matrix_view();
                let direct = p.matrix_view().kron(&q.matrix_view()).unwrap();
                assert_eq!(km, direct);
                assert!(km.is_doubly_stochastic() && km.is_zero_one());
            }
        }
    }

    #[test]
    fn cyclic_detection() {
        let r3 = Permutation::from_image(vec![1, 2, 0]).unwrap();
        assert!(r3.is_cyclic());
        assert!(!Permutation::identity(3).is_cyclic());
        // product of two transpositions on 4 symbols is not a 4-cycle
        let double_swap = Permutation::from_image(vec![1, 0, 3, 2]).unwrap();
        assert!(!double_swap.is_cyclic());
        let four_cycle = Permutation::from_cycle_visits(&[0, 2, 1, 3]).unwrap();
        assert!(four_cycle.is_cyclic());
    }

    #[test]
    fn from_cycle_visits_follows_arrows() {
        // 0 -> 2 -> 1 -> 3 -> 0
        let p = Permutation::from_cycle_visits(&[0, 2, 1, 3]).unwrap();
        assert_eq!(p.image(), &[2, 3, 1, 0]);
        assert!(Permutation::from_cycle_visits(&[0, 0, 1]).is_err());
    }
}
