//! Exact sparse integer linear algebra.
//!
//! Everything downstream (Hochschild boundaries, Connes' operator, total
//! complexes, filtered colimits) is expressed as integer matrices, and every
//! homology group is read off from a Smith normal form computed here.

mod group;
pub mod lattice;
mod smith;

pub use group::AbelianGroup;
pub use smith::{smith_normal_form, Smith};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse matrix with arbitrary-precision integer entries.
///
/// No stored entry is zero and every stored index lies inside the shape.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), BigInt::one());
        }
        m
    }

    /// Diagonal `rows x cols` matrix with the given leading diagonal entries.
    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triples. Repeated indices are
    /// summed; out-of-range indices are rejected.
    pub fn from_triples<I>(rows: usize, cols: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in triples {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            m.add_to(r, c, &v);
        }
        Ok(m)
    }

    /// Dense row-major construction from machine integers; handy in tests.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.as_ref().len(), cols, "ragged row {i}");
            for (j, &v) in row.as_ref().iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, data: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, row) in data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
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

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &BigInt) {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry((r, c)).or_default();
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rows];
        for (&(r, cc), x) in &self.entries {
            if cc == c {
                v[r] = x.clone();
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.rows]; self.cols];
        for (&(r, c), x) in &self.entries {
            out[c][r] = x.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        SparseIntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&i, v)| (i, v * k)).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &BigInt)>> = BTreeMap::new();
        for (&(r, c), v) in &rhs.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = SparseIntMatrix::zeros(self.rows, rhs.cols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add_to(i, j, &(a * b));
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (&(r, c), v) in &rhs.entries {
            out.add_to(r, c, v);
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![BigInt::zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] += a * &v[c];
            }
        }
        out
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        let mut out = SparseIntMatrix::zeros(self.rows, self.cols + rhs.cols);
        out.entries = self.entries.clone();
        for (&(r, c), v) in &rhs.entries {
            out.entries.insert((r, c + self.cols), v.clone());
        }
        out
    }

    /// `[self; rhs]`.
    pub fn vstack(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut out = SparseIntMatrix::zeros(self.rows + rhs.rows, self.cols);
        out.entries = self.entries.clone();
        for (&(r, c), v) in &rhs.entries {
            out.entries.insert((r + self.rows, c), v.clone());
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn insert_block(&mut self, r0: usize, c0: usize, block: &SparseIntMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for (&(r, c), v) in &block.entries {
            self.add_to(r0 + r, c0 + c, v);
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = SparseIntMatrix::zeros(rows.len(), cols.len());
        for (&(r, c), v) in &self.entries {
            if rows.contains(&r) && cols.contains(&c) {
                out.entries.insert((r - rows.start, c - cols.start), v.clone());
            }
        }
        out
    }

    /// Entries reduced into `[0, q)`; zero residues are dropped.
    pub fn reduce_mod(&self, q: &BigInt) -> Self {
        let mut out = SparseIntMatrix::zeros(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, v.mod_floor(q));
        }
        out
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        let mut out = SparseIntMatrix::zeros(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            out.entries.insert((perm[r], c), v.clone());
        }
        out
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.cols);
        let mut out = SparseIntMatrix::zeros(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            out.entries.insert((r, perm[c]), v.clone());
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(bareiss_determinant(self.to_dense()))
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|&(r, c)| r == c)
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.values().map(|v| v.abs()).max().unwrap_or_default()
    }
}

pub(crate) fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl fmt::Debug for SparseIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseIntMatrix({}x{}", self.rows, self.cols)?;
        if self.rows * self.cols <= 64 {
            write!(f, ", [")?;
            for r in 0..self.rows {
                if r > 0 {
                    write!(f, "; ")?;
                }
                for c in 0..self.cols {
                    if c > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", self.get(r, c))?;
                }
            }
            write!(f, "]")?;
        } else {
            write!(f, ", nnz={}", self.nnz())?;
        }
        write!(f, ")")
    }
}

impl Mul for &SparseIntMatrix {
    type Output = SparseIntMatrix;
    fn mul(self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &SparseIntMatrix {
    type Output = SparseIntMatrix;
    fn add(self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Neg for &SparseIntMatrix {
    type Output = SparseIntMatrix;
    fn neg(self) -> SparseIntMatrix {
        SparseIntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&i, v)| (i, -v)).collect(),
        }
    }
}

impl Sub for &SparseIntMatrix {
    type Output = SparseIntMatrix;
    fn sub(self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        self + &(-rhs)
    }
}

/// Cokernel `Z^rows / im(M)`.
pub fn cokernel(m: &SparseIntMatrix) -> AbelianGroup {
    let snf = Smith::of(m);
    AbelianGroup::from_orders(m.rows() - snf.rank(), snf.nonzero_diagonal().to_vec())
}

/// `ker(d_out) / im(d_in)` for composable integer matrices with `d_out * d_in = 0`.
///
/// Since `ker(d_out)` is a saturated sublattice, the torsion of the quotient is
/// the torsion of `coker(d_in)`, and the free rank is
/// `cols(d_out) - rank(d_out) - rank(d_in)`.
pub fn homology_pair(d_out: &SparseIntMatrix, d_in: &SparseIntMatrix) -> Result<AbelianGroup> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "d_out is {}x{} but d_in is {}x{}",
            d_out.rows(),
            d_out.cols(),
            d_in.rows(),
            d_in.cols()
        )));
    }
    if !d_out.checked_mul(d_in)?.is_zero() {
        return Err(Error::CompositionNonzero("d_out * d_in != 0".into()));
    }
    let out_rank = Smith::of(d_out).rank();
    let inc = Smith::of(d_in);
    let free = d_out.cols() - out_rank - inc.rank();
    Ok(AbelianGroup::from_orders(free, inc.nonzero_diagonal().to_vec()))
}

/// Rank of `m` over the prime field `F_p`.
pub fn rank_mod_prime(m: &SparseIntMatrix, p: &BigInt) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .to_dense()
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.mod_floor(p)).collect())
        .collect();
    let (rows, cols) = m.shape();
    let exp = p - BigInt::from(2);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = a[rank][c].modpow(&exp, p);
        for j in c..cols {
            a[rank][j] = (&a[rank][j] * &inv).mod_floor(p);
        }
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in c..cols {
                    let v = (&a[r][j] - &f * &a[rank][j]).mod_floor(p);
                    a[r][j] = v;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Deterministic primality test for machine-sized integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
