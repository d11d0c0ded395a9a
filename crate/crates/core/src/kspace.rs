//! The commutation-vector space K(S) ⊆ F_{N,d}.
//!
//! Entry n of v_{i,j} is the commutation phase of G_i and G_j on site n.
//! K(S) is their span; every element has digit sum 0, so dim K(S) ≤ N-1.
//! The pairing h(v, φ) = Σ_n v_n φ_n against a cut indicator φ decides
//! genuine entanglement. h is linear in v, so scanning a basis of K(S)
//! is equivalent to scanning all v_{i,j}.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartition::{Bipartition, MAX_SITES};
use crate::entanglement::some_row_detects;
use crate::error::{Error, Result};
use crate::stabilizer::Stabilizer;
use crate::zd::{add_mod, in_span, require_prime, sub_mod, ZdMatrix, ZdVector};

/// Full enumeration limit for the zero-digit-sum check.
pub const LEMMA2_ENUM_LIMIT: u64 = 1_000_000;
pub const LEMMA2_SAMPLES: usize = 10_000;

/// Row-reduced basis of K(S).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSpace {
    d: u32,
    n: usize,
    basis: ZdMatrix,
}

impl KSpace {
    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &ZdMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn contains(&self, v: &ZdVector) -> Result<bool> {
        in_span(v, &self.basis)
    }
}

/// v_{i,j} for 0-based generator indices.
pub fn commutation_vector(s: &Stabilizer, i: usize, j: usize) -> Result<ZdVector> {
    require_prime(s.modulus())?;
    if i == j {
        return Err(Error::SameGenerator(i + 1));
    }
    let gi = s.set().generator(i)?;
    let gj = s.set().generator(j)?;
    ZdVector::new(s.modulus(), (0..s.num_sites()).map(|n| gi.site_commutation(gj, n)))
}

/// All v_{i,j} with i < j, lexicographic.
pub fn commutation_vectors(s: &Stabilizer) -> Result<Vec<ZdVector>> {
    let k = s.len();
    let mut out = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            out.push(commutation_vector(s, i, j)?);
        }
    }
    Ok(out)
}

pub fn build_kspace(s: &Stabilizer) -> Result<KSpace> {
    require_prime(s.modulus())?;
    let vectors = commutation_vectors(s)?;
    let all = ZdMatrix::new(s.modulus(), s.num_sites(), vectors)?;
    Ok(KSpace { d: s.modulus(), n: s.num_sites(), basis: all.rref()? })
}

/// h(v, φ) = Σ_n v_n φ_n mod d.
pub fn h(v: &ZdVector, phi: &Bipartition) -> Result<u32> {
    if v.len() != phi.sites() {
        return Err(Error::DimensionMismatch { expected: v.len(), found: phi.sites() });
    }
    let d = v.modulus();
    Ok(v.entries()
        .iter()
        .enumerate()
        .filter(|(n, _)| phi.contains(*n))
        .fold(0, |acc, (_, &e)| add_mod(acc, e, d)))
}

/// GE verdict from the basis of K(S): every canonical nontrivial φ must
/// pair nontrivially with some basis row.
pub fn ge_via_lemma1(s: &Stabilizer) -> Result<bool> {
    let ks = build_kspace(s)?;
    Ok(ge_from_kspace(&ks))
}

pub(crate) fn ge_from_kspace(ks: &KSpace) -> bool {
    let n = ks.n;
    if !(2..=MAX_SITES).contains(&n) {
        return false;
    }
    let rows: Vec<Vec<u32>> = ks.basis.rows().iter().map(|r| r.entries().to_vec()).collect();
    (1u64..(1u64 << (n - 1))).into_par_iter().all(|mask| {
        let q = Bipartition::from_mask(n, mask).expect("mask in range");
        some_row_detects(&rows, ks.d, &q)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem2Check {
    pub ge: bool,
    pub dim_k: usize,
    pub iff_consistent: bool,
}

/// At d = 2, GE ⇔ dim K = N-1. For odd prime d only dim K = N-1 ⇒ GE is
/// asserted.
pub fn theorem2_check(s: &Stabilizer) -> Result<Theorem2Check> {
    let ks = build_kspace(s)?;
    let ge = ge_from_kspace(&ks);
    let full = ks.dim() + 1 == ks.n;
    let iff_consistent = if ks.d == 2 { ge == full } else { !full || ge };
    Ok(Theorem2Check { ge, dim_k: ks.dim(), iff_consistent })
}

/// When dim K = N-1, checks that K(S) is exactly the zero-digit-sum
/// hyperplane: cardinalities agree and every zero-sum vector is a member.
/// Enumerates the hyperplane when it has at most [`LEMMA2_ENUM_LIMIT`]
/// elements; otherwise tests [`LEMMA2_SAMPLES`] seeded random members.
pub fn lemma2_check(s: &Stabilizer) -> Result<bool> {
    let ks = build_kspace(s)?;
    let (d, n) = (ks.d, ks.n);
    if ks.dim() + 1 != n {
        return Err(Error::Precondition(format!("dim K(S) = {} but N-1 = {}", ks.dim(), n - 1)));
    }
    // the basis lies inside the hyperplane and has its dimension, so the
    // spans have equal cardinality d^(N-1)
    if ks.basis.rows().iter().any(|r| r.digit_sum() != 0) {
        return Ok(false);
    }
    let member = |free: &[u32]| -> Result<bool> {
        let last = free.iter().fold(0, |acc, &e| sub_mod(acc, e, d));
        let v = ZdVector::new(d, free.iter().copied().chain(std::iter::once(last)))?;
        ks.contains(&v)
    };
    let total = (d as u64).checked_pow((n - 1) as u32);
    match total {
        Some(total) if total <= LEMMA2_ENUM_LIMIT => {
            let mut count = 0u64;
            let mut free = vec![0u32; n - 1];
            for _ in 0..total {
                if !member(&free)? {
                    return Ok(false);
                }
                count += 1;
                for e in free.iter_mut().rev() {
                    *e += 1;
                    if *e < d {
                        break;
                    }
                    *e = 0;
                }
            }
            Ok(count == total)
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6c656d6d6132);
            for _ in 0..LEMMA2_SAMPLES {
                let free: Vec<u32> = (0..n - 1).map(|_| rng.random_range(0..d)).collect();
                if !member(&free)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// ⌈(N-1)/(d-1)⌉, the conjectured lower bound on dim K for GE sets.
pub fn conjecture1_bound(n: usize, d: u32) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if n == 0 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    Ok((n - 1).div_ceil(d as usize - 1))
}

/// σ(N, β) for every β: the number of φ ∈ F_{N,2} with h(u, φ) = β, via
/// σ(n+1, β) = σ(n, β) + σ(n, β - u_{n+1}).
pub fn sigma_table(u: &ZdVector) -> Result<Vec<u64>> {
    let d = u.modulus();
    if u.len() > 63 {
        return Err(Error::TooManySites(u.len(), 63));
    }
    let mut sigma = vec![0u64; d as usize];
    sigma[0] = 1;
    for &un in u.entries() {
        sigma = (0..d)
            .map(|beta| sigma[beta as usize] + sigma[sub_mod(beta, un, d) as usize])
            .collect();
    }
    Ok(sigma)
}

pub fn sigma_count(u: &ZdVector, beta: u32) -> Result<u64> {
    Ok(sigma_table(u)?[(beta % u.modulus()) as usize])
}

/// Smallest nonzero σ(N, β) over β.
pub fn sigma_min(u: &ZdVector) -> Result<u64> {
    Ok(sigma_table(u)?.into_iter().filter(|&c| c > 0).min().expect("β = h(u, 0) is always attained"))
}

/// 1 for N ≤ d-1, else 2^(N-(d-1)).
pub fn sigma_lower_bound(n: usize, d: u32) -> u64 {
    let dm1 = d as usize - 1;
    if n <= dm1 {
        1
    } else {
        1u64 << (n - dm1)
    }
}

/// Whether the minimal attainable σ meets the counting lower bound.
pub fn sigma_min_bound_check(u: &ZdVector) -> Result<bool> {
    Ok(sigma_min(u)? >= sigma_lower_bound(u.len(), u.modulus()))
}
