//! Exact linear algebra over Z_d for prime d.
//!
//! Residues are kept canonical in `[0, d)` and every operation reduces
//! eagerly. Products are formed in `u64`, so any modulus below 2^32 is safe.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn is_prime(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    if d < 4 {
        return true;
    }
    if d.is_multiple_of(2) {
        return false;
    }
    let mut f = 3u32;
    while (f as u64) * (f as u64) <= d as u64 {
        if d.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

pub(crate) fn require_prime(d: u32) -> Result<()> {
    if is_prime(d) {
        Ok(())
    } else {
        Err(Error::NonPrimeModulus(d))
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, d: u32) -> u32 {
    ((a as u64 * b as u64) % d as u64) as u32
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, d: u32) -> u32 {
    ((a as u64 + b as u64) % d as u64) as u32
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, d: u32) -> u32 {
    ((a as u64 + d as u64 - (b % d) as u64) % d as u64) as u32
}

/// Multiplicative inverse by Fermat's little theorem. `d` must be prime and
/// `a` nonzero mod `d`.
pub(crate) fn inv_mod(a: u32, d: u32) -> u32 {
    let mut base = a as u64 % d as u64;
    let mut exp = d as u64 - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % d as u64;
        }
        base = base * base % d as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Element of F_{N,d} = Z_d^N.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZdVector {
    d: u32,
    entries: Vec<u32>,
}

impl ZdVector {
    /// Builds a vector, reducing every entry mod `d`.
    pub fn new(d: u32, entries: impl IntoIterator<Item = u32>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let entries: Vec<u32> = entries.into_iter().map(|e| e % d).collect();
        if entries.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        Ok(Self { d, entries })
    }

    pub fn zeros(d: u32, len: usize) -> Self {
        Self { d, entries: vec![0; len] }
    }

    /// Unit vector e_n (0-based `n`).
    pub fn unit(d: u32, len: usize, n: usize) -> Self {
        let mut v = Self::zeros(d, len);
        v.entries[n] = 1;
        v
    }

    pub(crate) fn from_raw(d: u32, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < d));
        Self { d, entries }
    }

    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Sum of entries mod d.
    pub fn digit_sum(&self) -> u32 {
        self.entries.iter().fold(0, |acc, &e| add_mod(acc, e, self.d))
    }

    pub fn scaled(&self, s: u32) -> Self {
        let d = self.d;
        Self::from_raw(d, self.entries.iter().map(|&e| mul_mod(e, s % d, d)).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_compatible(self, other)?;
        let d = self.d;
        Ok(Self::from_raw(
            d,
            self.entries.iter().zip(&other.entries).map(|(&a, &b)| add_mod(a, b, d)).collect(),
        ))
    }
}

impl fmt::Display for ZdVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

fn check_compatible(a: &ZdVector, b: &ZdVector) -> Result<()> {
    if a.d != b.d {
        return Err(Error::ModulusMismatch(a.d, b.d));
    }
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(())
}

/// Rectangular matrix over Z_d stored as rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZdMatrix {
    d: u32,
    cols: usize,
    rows: Vec<ZdVector>,
}

impl ZdMatrix {
    pub fn new(d: u32, cols: usize, rows: Vec<ZdVector>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        for r in &rows {
            if r.d != d {
                return Err(Error::ModulusMismatch(d, r.d));
            }
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
        }
        Ok(Self { d, cols, rows })
    }

    /// Convenience constructor from nested slices.
    pub fn from_rows(d: u32, rows: &[&[u32]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| ZdVector::new(d, r.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, cols, rows)
    }

    pub fn empty(d: u32, cols: usize) -> Self {
        Self { d, cols, rows: Vec::new() }
    }

    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[ZdVector] {
        &self.rows
    }

    pub fn push(&mut self, row: ZdVector) -> Result<()> {
        if row.d != self.d {
            return Err(Error::ModulusMismatch(self.d, row.d));
        }
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols)
            .map(|c| ZdVector::from_raw(self.d, self.rows.iter().map(|r| r.entries[c]).collect()))
            .collect();
        Self { d: self.d, cols: self.rows.len(), rows }
    }

    /// Row rank over Z_d by fraction-free elimination: a row is cleared with
    /// `row <- p * row - b * pivot_row`, which never needs an inverse.
    pub fn rank(&self) -> Result<usize> {
        require_prime(self.d)?;
        let d = self.d;
        let mut a: Vec<Vec<u32>> = self.rows.iter().map(|r| r.entries.clone()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..a.len()).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(rank, p);
            let piv = a[rank][col];
            let (head, tail) = a.split_at_mut(rank + 1);
            let prow = &head[rank];
            for row in tail.iter_mut() {
                let b = row[col];
                if b == 0 {
                    continue;
                }
                for (x, &y) in row.iter_mut().zip(prow.iter()) {
                    *x = sub_mod(mul_mod(piv, *x, d), mul_mod(b, y, d), d);
                }
            }
            rank += 1;
            if rank == a.len() {
                break;
            }
        }
        Ok(rank)
    }

    /// Reduced row echelon form with zero rows dropped. The result is the
    /// unique canonical basis of the row space.
    pub fn rref(&self) -> Result<Self> {
        require_prime(self.d)?;
        let (rows, _) = rref_raw(self.d, self.cols, self.rows.iter().map(|r| r.entries.clone()).collect());
        Ok(Self {
            d: self.d,
            cols: self.cols,
            rows: rows.into_iter().map(|r| ZdVector::from_raw(self.d, r)).collect(),
        })
    }

    /// Basis of {x : M x = 0}.
    pub fn nullspace(&self) -> Result<Self> {
        require_prime(self.d)?;
        let d = self.d;
        let (rows, pivots) = rref_raw(d, self.cols, self.rows.iter().map(|r| r.entries.clone()).collect());
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut x = vec![0u32; self.cols];
            x[free] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                x[pc] = sub_mod(0, row[free], d);
            }
            basis.push(ZdVector::from_raw(d, x));
        }
        Ok(Self { d, cols: self.cols, rows: basis })
    }

    /// Whether `v` is a Z_d-combination of the rows.
    pub fn spans(&self, v: &ZdVector) -> Result<bool> {
        if v.d != self.d {
            return Err(Error::ModulusMismatch(self.d, v.d));
        }
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let base = self.rank()?;
        let mut ext = self.clone();
        ext.rows.push(v.clone());
        Ok(ext.rank()? == base)
    }
}

/// Shared RREF kernel; returns nonzero rows and their pivot columns.
pub(crate) fn rref_raw(d: u32, cols: usize, mut a: Vec<Vec<u32>>) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(r, p);
        let inv = inv_mod(a[r][col], d);
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, d);
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row.iter_mut().zip(&prow) {
                *x = sub_mod(*x, mul_mod(f, y, d), d);
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Row rank of `m` over Z_d.
pub fn rank(m: &ZdMatrix) -> Result<usize> {
    m.rank()
}

/// True iff `v` lies in the row space of `m`.
pub fn in_span(v: &ZdVector, m: &ZdMatrix) -> Result<bool> {
    m.spans(v)
}
