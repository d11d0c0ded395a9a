use stabspace_bench::{bench_cap, cycling_vector, xz_pair};
use stabspace_core::kspace::{build_kspace, sigma_min_bound_check};
use stabspace_core::smax::construct;

#[test]
fn benchmark_inputs_are_meaningful() {
    let s = xz_pair(6);
    assert_eq!(build_kspace(&s).unwrap().dim(), 1);
    assert!(xz_pair(9).projector(bench_cap()).is_err(), "3^9 exceeds the bench cap");
    assert!(xz_pair(3).projector(bench_cap()).is_ok());
    for n in [4, 8, 12] {
        assert!(sigma_min_bound_check(&cycling_vector(n, 3)).unwrap());
    }
    assert_eq!(construct(20, 2).unwrap().len(), 7);
}
