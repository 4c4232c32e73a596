//! Dense linear algebra over the field with two elements.
//!
//! Rows are packed into `u64` words so that row operations run a word at a
//! time. Pivots are always chosen at the lowest available index, which keeps
//! every derived basis reproducible.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zero(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = F2Vec::zero(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = F2Vec::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = F2Vec::zero(len);
        for &i in support {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn add_assign(&mut self, other: &F2Vec) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    /// Indices of the nonzero entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * WORD + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// A dense `rows × cols` matrix over F2, stored row-major with packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vec>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: F2Matrix,
    pub pivots: Vec<usize>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![F2Vec::zero(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        F2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds a matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(rows: usize, cols: &[F2Vec]) -> Self {
        let mut m = F2Matrix::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.support() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = F2Matrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of bounds");
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of bounds");
        self.data[i].set(j, value);
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of bounds");
        self.data[i].flip(j);
    }

    pub fn row(&self, i: usize) -> &F2Vec {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> F2Vec {
        let mut v = F2Vec::zero(self.rows);
        for i in 0..self.rows {
            if self.data[i].get(j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F2Vec::is_zero)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.data[i].support() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Matrix-vector product `self · x`.
    pub fn mul_vec(&self, x: &F2Vec) -> Result<F2Vec> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        let mut out = F2Vec::zero(self.rows);
        for i in 0..self.rows {
            if self.data[i].dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = F2Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = F2Vec::zero(other.cols);
            for k in self.data[i].support() {
                acc.add_assign(&other.data[k]);
            }
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.add_assign(b);
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        F2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut out = F2Matrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in self.data[i].support() {
                out.set(i, j, true);
            }
            for j in other.data[i].support() {
                out.set(i, self.cols + j, true);
            }
        }
        out
    }

    /// Reduced row echelon form with lowest-index pivots.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.data[i].get(c)) else {
                continue;
            };
            m.data.swap(r, p);
            let pivot_row = m.data[r].clone();
            for i in 0..m.rows {
                if i != r && m.data[i].get(c) {
                    m.data[i].add_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only; cheaper than a full reduction.
        let mut rows: Vec<F2Vec> = self.data.clone();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for row in rows.iter_mut().skip(r + 1) {
                if row.get(c) {
                    row.add_assign(&pivot_row);
                }
            }
            r += 1;
        }
        r
    }

    /// A basis of the null space `{x : self · x = 0}`.
    pub fn kernel_basis(&self) -> Vec<F2Vec> {
        let ech = self.echelon();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in ech.pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = F2Vec::unit(self.cols, free);
            for (r, &c) in ech.pivots.iter().enumerate() {
                if ech.matrix.data[r].get(free) {
                    v.set(c, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// A basis of the column space, as a list of columns of `self` (the pivot columns).
    pub fn column_space_pivots(&self) -> Vec<usize> {
        self.echelon().pivots
    }

    /// Solves `self · x = b`, returning `None` when `b` is not in the image.
    pub fn solve(&self, b: &F2Vec) -> Result<Option<F2Vec>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut rows: Vec<F2Vec> = self.data.clone();
        let mut rhs: Vec<bool> = (0..self.rows).map(|i| b.get(i)).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            rhs.swap(r, p);
            let pivot_row = rows[r].clone();
            let pivot_rhs = rhs[r];
            for i in 0..rows.len() {
                if i != r && rows[i].get(c) {
                    rows[i].add_assign(&pivot_row);
                    rhs[i] ^= pivot_rhs;
                }
            }
            pivots.push(c);
            r += 1;
        }
        if rhs[r..].iter().any(|&x| x) {
            return Ok(None);
        }
        let mut x = F2Vec::zero(self.cols);
        for (i, &c) in pivots.iter().enumerate() {
            if rhs[i] {
                x.set(c, true);
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Incrementally maintained reduced basis of a subspace, used to test
/// membership and to extend bases one vector at a time.
#[derive(Clone, Debug)]
pub struct Subspace {
    dim: usize,
    rows: Vec<F2Vec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(dim: usize) -> Self {
        Subspace {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &F2Vec) -> F2Vec {
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.add_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn add(&mut self, v: &F2Vec) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.first_one() else {
            return false;
        };
        for row in self.rows.iter_mut() {
            if row.get(p) {
                row.add_assign(&v);
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn basis(&self) -> &[F2Vec] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_rank_and_kernel() {
        let m = F2Matrix::identity(2);
        assert_eq!(m.rank(), 2);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn all_ones_rank_one() {
        let m = F2Matrix::from_fn(2, 2, |_, _| true);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let m = F2Matrix::zero(3, 3);
        assert_eq!(m.kernel_basis().len(), 3);
    }

    #[test]
    fn solve_identity_and_zero() {
        let b = F2Vec::from_bits(&[true, false, true]);
        assert_eq!(F2Matrix::identity(3).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(F2Matrix::zero(3, 3).solve(&b).unwrap(), None);
    }

    #[test]
    fn solve_rejects_bad_length() {
        let b = F2Vec::zero(2);
        assert!(F2Matrix::identity(3).solve(&b).is_err());
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut m = F2Matrix::zero(3, 130);
        m.set(0, 0, true);
        m.set(0, 129, true);
        m.set(1, 64, true);
        m.set(2, 129, true);
        assert_eq!(m.rank(), 3);
        assert_eq!(m.kernel_basis().len(), 127);
    }

    #[test]
    fn subspace_membership() {
        let mut s = Subspace::new(4);
        assert!(s.add(&F2Vec::from_bits(&[true, true, false, false])));
        assert!(s.add(&F2Vec::from_bits(&[false, true, true, false])));
        assert!(!s.add(&F2Vec::from_bits(&[true, false, true, false])));
        assert!(s.contains(&F2Vec::from_bits(&[true, false, true, false])));
        assert!(!s.contains(&F2Vec::from_bits(&[false, false, false, true])));
        assert_eq!(s.dimension(), 2);
    }
}
