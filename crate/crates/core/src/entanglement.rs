//! Bipartite and genuine entanglement of a stabilizer subspace, decided
//! from generator commutation data alone.
//!
//! V is entangled across Q|Q̄ iff some pair of generators fails to commute
//! once restricted to Q. The symplectic form over all sites vanishes, so the
//! verdict for Q and for Q̄ always agree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartition::{Bipartition, MAX_SITES};
use crate::error::{Error, Result};
use crate::stabilizer::Stabilizer;

/// First non-commuting restricted pair, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub tau: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutVerdict {
    pub entangled: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeVerdict {
    pub genuinely_entangled: bool,
    /// Lowest canonical cut across which V is not entangled.
    pub counterexample: Option<Bipartition>,
}

fn check_cut(s: &Stabilizer, q: &Bipartition) -> Result<()> {
    if q.sites() != s.num_sites() {
        return Err(Error::DimensionMismatch { expected: s.num_sites(), found: q.sites() });
    }
    if q.is_trivial() {
        return Err(Error::TrivialBipartition(q.to_string()));
    }
    Ok(())
}

/// Entanglement across Q, with the lexicographically first witness pair.
pub fn is_entangled_wrt(s: &Stabilizer, q: &Bipartition) -> Result<CutVerdict> {
    check_cut(s, q)?;
    let gens = s.generators();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let tau = gens[i].commutation_phase_on(&gens[j], q)?;
            if tau != 0 {
                return Ok(CutVerdict { entangled: true, witness: Some(Witness { i: i + 1, j: j + 1, tau }) });
            }
        }
    }
    Ok(CutVerdict { entangled: false, witness: None })
}

/// Per-pair, per-site commutation table: `table[p][n]` for the p-th pair
/// (i < j, lexicographic).
pub(crate) fn pair_site_table(s: &Stabilizer) -> Vec<Vec<u32>> {
    let gens = s.generators();
    let mut table = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            table.push((0..s.num_sites()).map(|n| gens[i].site_commutation(&gens[j], n)).collect());
        }
    }
    table.retain(|row: &Vec<u32>| row.iter().any(|&t| t != 0));
    table
}

/// Whether some row of `vectors` pairs nontrivially with the cut.
pub(crate) fn some_row_detects(vectors: &[Vec<u32>], d: u32, q: &Bipartition) -> bool {
    let n = q.sites();
    vectors.iter().any(|v| {
        let mut acc = 0u64;
        let mut mask = q.mask();
        while mask != 0 {
            let bit = mask.trailing_zeros() as usize;
            acc += v[n - 1 - bit] as u64;
            mask &= mask - 1;
        }
        !acc.is_multiple_of(d as u64)
    })
}

/// Scans all 2^(N-1) - 1 canonical cuts. The scan runs in parallel; the
/// reported counterexample is always the lowest failing mask.
pub fn is_genuinely_entangled(s: &Stabilizer) -> Result<GeVerdict> {
    let n = s.num_sites();
    if n > MAX_SITES {
        return Err(Error::TooManySites(n, MAX_SITES));
    }
    if n < 2 {
        // no nontrivial cut exists; a single site is never entangled
        return Ok(GeVerdict { genuinely_entangled: false, counterexample: None });
    }
    let table = pair_site_table(s);
    let d = s.modulus();
    let cuts = 1u64..(1u64 << (n - 1));
    let failing = cuts
        .into_par_iter()
        .find_first(|&mask| {
            let q = Bipartition::from_mask(n, mask).expect("mask in range");
            !some_row_detects(&table, d, &q)
        })
        .map(|mask| Bipartition::from_mask(n, mask).expect("mask in range"));
    Ok(GeVerdict { genuinely_entangled: failing.is_none(), counterexample: failing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::GeneratorSet;

    fn stab(d: u32, words: &[&str]) -> Stabilizer {
        Stabilizer::new(GeneratorSet::parse_words(d, words).unwrap()).unwrap()
    }

    #[test]
    fn cut_examples() {
        let s = stab(3, &["X X X", "Z Z Z"]);
        let q = Bipartition::from_sites(3, &[1]).unwrap();
        let v = is_entangled_wrt(&s, &q).unwrap();
        assert_eq!(v, CutVerdict { entangled: true, witness: Some(Witness { i: 1, j: 2, tau: 2 }) });

        let sp = stab(3, &["X Z I", "Z X I"]);
        let q3 = Bipartition::from_sites(3, &[3]).unwrap();
        assert!(!is_entangled_wrt(&sp, &q3).unwrap().entangled);

        let zz = stab(2, &["Z Z"]);
        let q = Bipartition::from_sites(2, &[1]).unwrap();
        assert!(!is_entangled_wrt(&zz, &q).unwrap().entangled);
    }

    #[test]
    fn trivial_cut_rejected() {
        let s = stab(3, &["X X X", "Z Z Z"]);
        let all = Bipartition::from_sites(3, &[1, 2, 3]).unwrap();
        assert!(matches!(is_entangled_wrt(&s, &all), Err(Error::TrivialBipartition(_))));
        let none = Bipartition::from_mask(3, 0).unwrap();
        assert!(is_entangled_wrt(&s, &none).is_err());
    }

    #[test]
    fn ge_examples() {
        assert!(is_genuinely_entangled(&stab(3, &["X X X", "Z Z Z"])).unwrap().genuinely_entangled);
        let v = is_genuinely_entangled(&stab(3, &["X Z I", "Z X I"])).unwrap();
        assert!(!v.genuinely_entangled);
        assert_eq!(v.counterexample.unwrap().to_string(), "001");
        assert!(is_genuinely_entangled(&stab(2, &["X X", "Z Z"])).unwrap().genuinely_entangled);
    }

    #[test]
    fn complement_invariant() {
        let s = stab(3, &["X Z I", "Z X I"]);
        for mask in 1..7u64 {
            let q = Bipartition::from_mask(3, mask).unwrap();
            assert_eq!(
                is_entangled_wrt(&s, &q).unwrap().entangled,
                is_entangled_wrt(&s, &q.complement()).unwrap().entangled
            );
        }
    }
}
