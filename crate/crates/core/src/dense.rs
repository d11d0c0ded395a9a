//! Dense complex operators on (C^d)^{⊗N}.
//!
//! Basis index digits are big-endian: site 1 is the most significant digit.
//! Partial transposes index against that ordering.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::bipartition::Bipartition;
use crate::error::{Error, Result};
use crate::pauli::PauliWord;

pub const DEFAULT_DENSE_CAP: usize = 1024;
pub const DENSE_CAP_ENV: &str = "STABSPACE_DENSE_CAP";

/// Hermiticity tolerance used when a caller asks for a spectral routine.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Largest d^N for which dense matrices are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseCap(pub usize);

impl Default for DenseCap {
    fn default() -> Self {
        DenseCap(DEFAULT_DENSE_CAP)
    }
}

impl DenseCap {
    /// Reads `STABSPACE_DENSE_CAP`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(DENSE_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(DenseCap)
            .unwrap_or_default()
    }

    /// d^N after checking it against the cap.
    pub fn check(&self, d: u32, sites: usize) -> Result<usize> {
        let dim = (d as usize)
            .checked_pow(sites as u32)
            .ok_or_else(|| Error::Overflow(format!("{d}^{sites}")))?;
        if dim > self.0 {
            return Err(Error::DenseCapExceeded { dim, cap: self.0 });
        }
        Ok(dim)
    }
}

/// A d^N × d^N complex matrix with its site factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    local_dim: usize,
    sites: usize,
    mat: DMatrix<Complex64>,
}

/// A Pauli word as a monomial matrix: column j has its single nonzero entry
/// `phase[j]` in row `target[j]`.
#[derive(Debug, Clone)]
pub(crate) struct Monomial {
    pub target: Vec<usize>,
    pub phase: Vec<Complex64>,
}

impl Monomial {
    pub fn of(word: &PauliWord, dim: usize) -> Self {
        let d = word.modulus() as usize;
        let n = word.num_sites();
        let roots = roots_of_unity(word.modulus());
        let mut target = vec![0usize; dim];
        let mut phase = vec![Complex64::new(0.0, 0.0); dim];
        let mut digits = vec![0usize; n];
        for j in 0..dim {
            // X^x Z^z |j> = ω^{z j} |j + x>
            let mut t = 0usize;
            let mut e = word.phase() as usize;
            for (digit, s) in digits.iter().zip(word.sites()) {
                e += s.z as usize * digit;
                t = t * d + (digit + s.x as usize) % d;
            }
            target[j] = t;
            phase[j] = roots[e % d];
            increment(&mut digits, d);
        }
        Self { target, phase }
    }

    /// `self · m`.
    pub fn apply_left(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(m.nrows(), m.ncols());
        for (j, (&t, &p)) in self.target.iter().zip(&self.phase).enumerate() {
            for c in 0..m.ncols() {
                out[(t, c)] += p * m[(j, c)];
            }
        }
        out
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let dim = self.target.len();
        let mut out = DMatrix::zeros(dim, dim);
        for (j, (&t, &p)) in self.target.iter().zip(&self.phase).enumerate() {
            out[(t, j)] = p;
        }
        out
    }
}

fn increment(digits: &mut [usize], d: usize) {
    for digit in digits.iter_mut().rev() {
        *digit += 1;
        if *digit < d {
            return;
        }
        *digit = 0;
    }
}

pub(crate) fn roots_of_unity(d: u32) -> Vec<Complex64> {
    (0..d).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)).collect()
}

impl DenseOperator {
    pub fn new(local_dim: usize, sites: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        let dim = local_dim
            .checked_pow(sites as u32)
            .ok_or_else(|| Error::Overflow(format!("{local_dim}^{sites}")))?;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: mat.nrows().max(mat.ncols()) });
        }
        Ok(Self { local_dim, sites, mat })
    }

    pub fn identity(local_dim: usize, sites: usize) -> Self {
        let dim = local_dim.pow(sites as u32);
        Self { local_dim, sites, mat: DMatrix::identity(dim, dim) }
    }

    pub(crate) fn from_word(word: &PauliWord, cap: DenseCap) -> Result<Self> {
        let dim = cap.check(word.modulus(), word.num_sites())?;
        Ok(Self {
            local_dim: word.modulus() as usize,
            sites: word.num_sites(),
            mat: Monomial::of(word, dim).to_matrix(),
        })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    pub(crate) fn with_matrix(&self, mat: DMatrix<Complex64>) -> Self {
        Self { local_dim: self.local_dim, sites: self.sites, mat }
    }

    pub fn adjoint(&self) -> Self {
        self.with_matrix(self.mat.adjoint())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.with_matrix(&self.mat * &other.mat))
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.mat.iter().zip(other.mat.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() < tol
    }

    /// Transposes the tensor factors in Q: entry ((i_Q, i_Q̄), (j_Q, j_Q̄))
    /// moves to ((j_Q, i_Q̄), (i_Q, j_Q̄)).
    pub fn partial_transpose(&self, q: &Bipartition) -> Result<Self> {
        if q.sites() != self.sites {
            return Err(Error::DimensionMismatch { expected: self.sites, found: q.sites() });
        }
        let d = self.local_dim;
        let dim = self.dim();
        // place value of every site, and the Q-part of each index
        let weights: Vec<usize> = (0..self.sites).map(|s| d.pow((self.sites - 1 - s) as u32)).collect();
        let q_part: Vec<usize> = (0..dim)
            .map(|idx| {
                (0..self.sites)
                    .filter(|&s| q.contains(s))
                    .map(|s| (idx / weights[s]) % d * weights[s])
                    .sum()
            })
            .collect();
        let mut out = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let ni = i - q_part[i] + q_part[j];
                let nj = j - q_part[j] + q_part[i];
                out[(ni, nj)] = self.mat[(i, j)];
            }
        }
        Ok(self.with_matrix(out))
    }

    /// Ascending eigenvalues of a Hermitian operator.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let dev = self.hermitian_deviation();
        if dev >= HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(self.mat.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }
}

/// `m^{T_Q}`.
pub fn partial_transpose(m: &DenseOperator, q: &Bipartition) -> Result<DenseOperator> {
    m.partial_transpose(q)
}

/// Smallest eigenvalue of a Hermitian operator.
pub fn min_eigenvalue(m: &DenseOperator) -> Result<f64> {
    m.min_eigenvalue()
}
