//! Dense linear algebra over a prime field.
//!
//! Matrices are row-major `u32` arrays with entries in `0..p`. Rank
//! computations go through an incremental [`Echelon`] builder, which switches
//! to packed 64-bit rows in characteristic two.

use std::fmt;

use crate::error::{Error, Result};

/// The field `GF(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

/// Trial division; only small moduli are ever used.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let p = u32::try_from(p).map_err(|_| Error::param("p", "modulus must fit in 32 bits"))?;
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Maps a signed integer to its residue.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(i64::from(self.p)) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.p)) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, u64::from(self.p) - 2)
    }

    /// Signed representative in `(-p/2, p/2]`, for display.
    pub fn lift(self, a: u32) -> i64 {
        let a = i64::from(a);
        let p = i64::from(self.p);
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

/// A matrix over `GF(p)` with row-major storage.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix over GF({}) {}x{}", self.field.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, field.reduce(v));
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.p);
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b != 0 {
                        let v = f.add(out.get(r, c), f.mul(a, b));
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape(format!(
                "row counts differ: {} vs {}",
                self.rows, other.rows
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            out.data[r * out.cols..r * out.cols + self.cols].copy_from_slice(self.row(r));
            out.data[r * out.cols + self.cols..(r + 1) * out.cols].copy_from_slice(other.row(r));
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        // row rank of the shorter orientation is cheaper
        if self.rows > self.cols * 2 {
            return self.transpose().rank();
        }
        let mut e = Echelon::new(self.field, self.cols);
        for r in 0..self.rows {
            e.insert(self.row(r));
        }
        e.rank()
    }

    pub fn kernel_dim(&self) -> usize {
        let r = self.rank();
        debug_assert!(r <= self.cols);
        self.cols - r
    }
}

/// `rank(m)` for a matrix over `GF(p)`.
pub fn rank(m: &FieldMatrix) -> usize {
    m.rank()
}

/// `cols(m) - rank(m)`.
pub fn kernel_dim(m: &FieldMatrix) -> usize {
    m.kernel_dim()
}

/// Dimension of `colspace(a) + colspace(b)` modulo `colspace(b)`.
pub fn image_quotient_dim(a: &FieldMatrix, b: &FieldMatrix) -> Result<usize> {
    if a.rows != b.rows {
        return Err(Error::Shape(format!(
            "column spaces live in different spaces: {} vs {} rows",
            a.rows, b.rows
        )));
    }
    let mut e = Echelon::new(a.field, a.rows);
    let bt = b.transpose();
    for r in 0..bt.rows {
        e.insert(bt.row(r));
    }
    let base = e.rank();
    let at = a.transpose();
    for r in 0..at.rows {
        e.insert(at.row(r));
    }
    Ok(e.rank() - base)
}

/// Incrementally built row echelon form.
///
/// Rows are reduced against every stored row in insertion order, and a new
/// row is stored (scaled so its pivot is one) only if something survives.
#[derive(Debug, Clone)]
pub enum Echelon {
    Dense(DenseEchelon),
    Bits(BitEchelon),
}

impl Echelon {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        if field.p() == 2 {
            Echelon::Bits(BitEchelon::new(cols))
        } else {
            Echelon::Dense(DenseEchelon::new(field, cols))
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Echelon::Dense(e) => e.cols,
            Echelon::Bits(e) => e.cols,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Echelon::Dense(e) => e.pivots.len(),
            Echelon::Bits(e) => e.pivots.len(),
        }
    }

    /// Pivot columns of the stored rows, in insertion order.
    pub fn pivots(&self) -> &[usize] {
        match self {
            Echelon::Dense(e) => &e.pivots,
            Echelon::Bits(e) => &e.pivots,
        }
    }

    /// Inserts a dense row; returns whether the rank grew.
    pub fn insert(&mut self, row: &[u32]) -> bool {
        match self {
            Echelon::Dense(e) => e.insert(row.to_vec()),
            Echelon::Bits(e) => e.insert_iter(row.iter().enumerate().filter(|(_, &v)| v & 1 == 1).map(|(i, _)| i)),
        }
    }

    /// Inserts a row given by `(column, value)` pairs. Repeated columns add up.
    pub fn insert_sparse(&mut self, entries: &[(usize, u32)]) -> bool {
        match self {
            Echelon::Dense(e) => {
                let mut row = vec![0u32; e.cols];
                for &(c, v) in entries {
                    row[c] = e.field.add(row[c], v % e.field.p());
                }
                e.insert(row)
            }
            Echelon::Bits(e) => {
                let mut row = vec![0u64; e.words];
                for &(c, v) in entries {
                    if v & 1 == 1 {
                        row[c / 64] ^= 1 << (c % 64);
                    }
                }
                e.insert_words(row)
            }
        }
    }

    /// True if the row lies in the span of the stored rows.
    pub fn contains(&self, row: &[u32]) -> bool {
        let mut copy = self.clone();
        !copy.insert(row)
    }
}

#[derive(Debug, Clone)]
pub struct DenseEchelon {
    field: PrimeField,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl DenseEchelon {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        DenseEchelon {
            field,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn insert(&mut self, mut row: Vec<u32>) -> bool {
        assert_eq!(row.len(), self.cols, "row length does not match");
        let p = u64::from(self.field.p());
        for (stored, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = row[piv];
            if c == 0 {
                continue;
            }
            let m = p - u64::from(c);
            for (x, &y) in row[piv..].iter_mut().zip(&stored[piv..]) {
                if y != 0 {
                    *x = ((u64::from(*x) + m * u64::from(y)) % p) as u32;
                }
            }
        }
        let Some(piv) = row.iter().position(|&v| v != 0) else {
            return false;
        };
        let inv = self.field.inv(row[piv]);
        if inv != 1 {
            for x in &mut row[piv..] {
                *x = self.field.mul(*x, inv);
            }
        }
        self.rows.push(row);
        self.pivots.push(piv);
        true
    }
}

/// Echelon form over `GF(2)` with rows packed into 64-bit words.
#[derive(Debug, Clone)]
pub struct BitEchelon {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl BitEchelon {
    pub fn new(cols: usize) -> Self {
        BitEchelon {
            cols,
            words: cols.div_ceil(64),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn insert_iter(&mut self, ones: impl Iterator<Item = usize>) -> bool {
        let mut row = vec![0u64; self.words];
        for c in ones {
            row[c / 64] ^= 1 << (c % 64);
        }
        self.insert_words(row)
    }

    fn insert_words(&mut self, mut row: Vec<u64>) -> bool {
        for (stored, &piv) in self.rows.iter().zip(&self.pivots) {
            if row[piv / 64] >> (piv % 64) & 1 == 1 {
                for (x, y) in row[piv / 64..].iter_mut().zip(&stored[piv / 64..]) {
                    *x ^= y;
                }
            }
        }
        let Some(w) = row.iter().position(|&v| v != 0) else {
            return false;
        };
        let piv = w * 64 + row[w].trailing_zeros() as usize;
        self.rows.push(row);
        self.pivots.push(piv);
        true
    }
}
