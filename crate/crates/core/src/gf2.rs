//! Dense linear algebra over Z_2.
//!
//! Vectors are packed 64 bits per word and rows of a [`Gf2Matrix`] are
//! [`BitVector`]s, so elimination steps are word-wide XORs. Pivoting is
//! deterministic (lowest available row for each column, columns left to
//! right), which makes [`Gf2Matrix::rref`] output reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over Z_2.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    /// Builds a vector from the low `len` bits of `value` (bit `i` of `value`
    /// becomes coordinate `i`).
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len >= WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a string of `'0'`/`'1'` characters; character `i` is coordinate `i`.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::input(format!("invalid bit character {other:?} in {s:?}"))),
            }
        }
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let m = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        debug_assert_eq!(self.len, other.len);
        BitVector { len: self.len, words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    /// Complement within the vector's length.
    pub fn not(&self) -> BitVector {
        let mut out = BitVector { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        out.clear_tail();
        out
    }

    fn clear_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over Z_2.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &BitVector) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// The first word, i.e. coordinates `0..64` packed little-endian.
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Selects the coordinates listed in `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> BitVector {
        let mut out = BitVector::zeros(positions.len());
        for (k, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(k, true);
            }
        }
        out
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl Serialize for BitVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitVector::parse_bits(&s).map_err(serde::de::Error::custom)
    }
}

/// Row-major matrix over Z_2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

/// Result of [`Gf2Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Gf2Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix { rows, cols, data: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Gf2Matrix { rows: n, cols: n, data: (0..n).map(|i| BitVector::unit(n, i)).collect() }
    }

    /// Builds a matrix from row vectors, each of length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, actual: bad.len(), context: "row length" });
        }
        Ok(Gf2Matrix { rows: rows.len(), cols, data: rows })
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Gf2Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, actual: c.len(), context: "column length" });
            }
            for i in c.iter_ones() {
                m.data[i].set(j, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        // Columns of the transpose are the rows of `self`.
        Gf2Matrix::from_columns(self.cols, &self.data).expect("rows have uniform length")
    }

    /// Matrix-vector product `self · x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: x.len(),
                context: "matrix-vector product",
            });
        }
        Ok(BitVector::from_indices(self.rows, (0..self.rows).filter(|&r| self.data[r].dot(x))))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: other.rows,
                context: "row count for horizontal concatenation",
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.concat(b)).collect();
        Ok(Gf2Matrix { rows: self.rows, cols: self.cols + other.cols, data })
    }

    /// Reduced row-echelon form. Row space is preserved.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&r| m.data[r].get(col)) else {
                continue;
            };
            m.data.swap(pivot_row, found);
            let pivot = m.data[pivot_row].clone();
            for r in 0..m.rows {
                if r != pivot_row && m.data[r].get(col) {
                    m.data[r].xor_assign(&pivot);
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
        }
        Rref { matrix: m, rank: pivot_row, pivot_cols }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Solves `self · x = b`; `None` when `b` is outside the column space.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: b.len(),
                context: "right-hand side length",
            });
        }
        let rhs = Gf2Matrix::from_columns(self.rows, std::slice::from_ref(b))?;
        let aug = self.hconcat(&rhs)?.rref();
        if aug.pivot_cols.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (r, &c) in aug.pivot_cols.iter().enumerate() {
            if aug.matrix.get(r, self.cols) {
                x.set(c, true);
            }
        }
        Ok(Some(x))
    }

    /// A basis of the kernel `{x : self · x = 0}`, one vector per free column.
    pub fn nullspace_basis(&self) -> Vec<BitVector> {
        let rr = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &rr.pivot_cols {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::unit(self.cols, f);
                for (r, &c) in rr.pivot_cols.iter().enumerate() {
                    if rr.matrix.get(r, f) {
                        v.set(c, true);
                    }
                }
                v
            })
            .collect()
    }

    /// True iff every column of `candidates` lies in the column span of `self`.
    pub fn span_contains(&self, candidates: &Gf2Matrix) -> Result<bool> {
        if self.rows != candidates.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: candidates.rows,
                context: "row count for span containment",
            });
        }
        Ok(self.rank() == self.hconcat(candidates)?.rank())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Free-function form of [`Gf2Matrix::rref`].
pub fn rref(m: &Gf2Matrix) -> Rref {
    m.rref()
}

/// Free-function form of [`Gf2Matrix::solve`].
pub fn solve(a: &Gf2Matrix, b: &BitVector) -> Result<Option<BitVector>> {
    a.solve(b)
}

/// Free-function form of [`Gf2Matrix::nullspace_basis`].
pub fn nullspace_basis(a: &Gf2Matrix) -> Vec<BitVector> {
    a.nullspace_basis()
}

/// Free-function form of [`Gf2Matrix::span_contains`].
pub fn span_contains(generators: &Gf2Matrix, candidates: &Gf2Matrix) -> Result<bool> {
    generators.span_contains(candidates)
}
