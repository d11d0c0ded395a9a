use proptest::prelude::*;

use stabspace_core::dense::DenseCap;
use stabspace_core::explorer::{enumerate, ScanConfig};
use stabspace_core::kspace::{build_kspace, ge_via_lemma1, h};
use stabspace_core::npt::{max_product_fidelity, PRODUCT_FIDELITY};
use stabspace_core::{is_entangled_wrt, is_genuinely_entangled, Bipartition, GeneratorSet, PauliWord, SitePauli, Stabilizer};

fn word(d: u32, n: usize) -> impl Strategy<Value = PauliWord> {
    (0..d, proptest::collection::vec((0..d, 0..d), n)).prop_map(move |(r, xz)| {
        PauliWord::new(d, r, xz.into_iter().map(|(x, z)| SitePauli::new(x, z, d)).collect()).unwrap()
    })
}

fn small_stabilizers(d: u32, n: usize, k: usize) -> Vec<Stabilizer> {
    enumerate(&ScanConfig::new(d, n, k)).unwrap().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(words in proptest::collection::vec(word(5, 3), 1..5)) {
        let set = GeneratorSet::new(words).unwrap();
        prop_assert_eq!(GeneratorSet::from_text(&set.to_text()).unwrap(), set);
    }

    #[test]
    fn restricted_phases_add_up(a in word(3, 4), b in word(3, 4), mask in 1u64..8) {
        let q = Bipartition::from_mask(4, mask).unwrap();
        let on_q = a.commutation_phase_on(&b, &q).unwrap();
        let off_q = a.commutation_phase_on(&b, &q.complement()).unwrap();
        prop_assert_eq!((on_q + off_q) % 3, a.commutation_phase(&b).unwrap());
    }

    #[test]
    fn h_pairing_matches_restricted_phase(idx in 0usize..200, mask in 1u64..4) {
        let sets = small_stabilizers(3, 3, 2);
        let s = &sets[idx % sets.len()];
        let q = Bipartition::from_mask(3, mask).unwrap();
        let g = s.generators();
        let v = stabspace_core::kspace::commutation_vector(s, 0, 1).unwrap();
        prop_assert_eq!(h(&v, &q).unwrap(), g[0].commutation_phase_on(&g[1], &q).unwrap());
    }
}

#[test]
fn lemma1_agrees_with_cut_scan() {
    for (d, n, k) in [(2, 3, 2), (2, 4, 2), (3, 3, 2), (2, 3, 3)] {
        for s in small_stabilizers(d, n, k) {
            let ge = is_genuinely_entangled(&s).unwrap().genuinely_entangled;
            assert_eq!(ge_via_lemma1(&s).unwrap(), ge, "{s}");
            if ge {
                assert!(build_kspace(&s).unwrap().dim() >= 1);
            }
        }
    }
}

#[test]
fn projector_is_the_stabilized_subspace() {
    let cap = DenseCap::default();
    for s in small_stabilizers(3, 2, 1).into_iter().chain(small_stabilizers(2, 3, 2).into_iter().step_by(7)) {
        let p = s.projector(cap).unwrap();
        let p2 = p.mul(&p).unwrap();
        assert!(p2.max_abs_diff(&p) < 1e-10, "{s}");
        assert!(p.is_hermitian(1e-10));
        let dim_v = s.subspace_dimension().unwrap() as f64;
        assert!((p.trace().re - dim_v).abs() < 1e-9, "{s}");
        for g in s.generators() {
            let gp = g.dense_matrix(cap).unwrap().mul(&p).unwrap();
            assert!(gp.max_abs_diff(&p) < 1e-10, "{s}");
        }
    }
}

#[test]
fn partial_transpose_is_an_involution() {
    let cap = DenseCap::default();
    let s = Stabilizer::new(GeneratorSet::parse_words(3, &["X X X", "Z Z Z"]).unwrap()).unwrap();
    let p = s.projector(cap).unwrap();
    for q in Bipartition::canonical_cuts(3) {
        let twice = p.partial_transpose(&q).unwrap().partial_transpose(&q).unwrap();
        assert!(twice.max_abs_diff(&p) < 1e-14);
        // transposing Q then Q̄ is the full transpose
        let full = p.partial_transpose(&q).unwrap().partial_transpose(&q.complement()).unwrap();
        assert!((full.matrix() - p.matrix().transpose()).iter().all(|z| z.norm() < 1e-14));
    }
}

#[test]
fn separable_cuts_contain_product_states() {
    let cap = DenseCap::default();
    let mut checked = 0;
    for s in small_stabilizers(2, 3, 2).into_iter().chain(small_stabilizers(3, 3, 2).into_iter().step_by(11)) {
        let p = s.projector(cap).unwrap();
        for q in Bipartition::canonical_cuts(3) {
            if !is_entangled_wrt(&s, &q).unwrap().entangled {
                let prod = max_product_fidelity(&p, &q, 0).unwrap();
                assert!(prod.fidelity > PRODUCT_FIDELITY, "{s} cut {q}: {}", prod.fidelity);
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}
