//! Fixtures shared by the benchmarks.

use stabspace_core::dense::DenseCap;
use stabspace_core::{GeneratorSet, Stabilizer, ZdVector};

/// ⟨X^{⊗N}, Z^{⊗N}⟩ at d = 3; commuting only when 3 divides N.
pub fn xz_pair(n: usize) -> Stabilizer {
    let xs = vec!["X"; n].join(" ");
    let zs = vec!["Z"; n].join(" ");
    Stabilizer::new(GeneratorSet::parse_words(3, &[xs, zs]).expect("valid words")).expect("commuting pair")
}

/// Deterministic u ∈ F_{N,d} with entries cycling through 1..d.
pub fn cycling_vector(n: usize, d: u32) -> ZdVector {
    ZdVector::new(d, (0..n).map(|i| 1 + i as u32 % (d - 1))).expect("entries below d")
}

/// Cap large enough for every fixture used in dense benchmarks.
pub fn bench_cap() -> DenseCap {
    DenseCap(4096)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        assert_eq!(xz_pair(3).len(), 2);
        assert_eq!(cycling_vector(5, 3).entries(), &[1, 2, 1, 2, 1]);
        assert!(bench_cap().check(2, 12).is_ok());
    }
}
