//! Acceptance suite. Runs each criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stabspace_core::dense::DenseCap;
use stabspace_core::explorer::{scan, ScanConfig, ScanKind};
use stabspace_core::kspace::{build_kspace, conjecture1_bound, lemma2_check, sigma_min, sigma_table, theorem2_check};
use stabspace_core::npt::{verify_npt, witness_bound, CutOutcome};
use stabspace_core::smax::{construct, expected_basis, k_min};
use stabspace_core::{
    is_entangled_wrt, is_genuinely_entangled, validate, Bipartition, GeneratorSet, PauliWord, SitePauli, Stabilizer,
    ZdMatrix, ZdVector,
};

fn stab(d: u32, words: &[&str]) -> Stabilizer {
    Stabilizer::new(GeneratorSet::parse_words(d, words).unwrap()).unwrap()
}

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed <= limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn criterion1() -> Result<String, String> {
    let t = Instant::now();
    let v = stab(3, &["X X X", "Z Z Z"]);
    let ge = is_genuinely_entangled(&v).unwrap();
    check(ge.genuinely_entangled && ge.counterexample.is_none(), "⟨XXX, ZZZ⟩ not GE")?;
    check(build_kspace(&v).unwrap().dim() == 1, "dim K(⟨XXX, ZZZ⟩) ≠ 1")?;

    let vp = stab(3, &["X Z I", "Z X I"]);
    let ge = is_genuinely_entangled(&vp).unwrap();
    let q3 = Bipartition::from_sites(3, &[3]).unwrap();
    check(!ge.genuinely_entangled, "⟨XZ1, ZX1⟩ reported GE")?;
    check(ge.counterexample == Some(q3), format!("failing cut {:?}, want 001", ge.counterexample.map(|c| c.to_string())))?;
    check(q3.to_string() == "001", "cut {3} does not print as 001")?;
    check(!is_entangled_wrt(&vp, &q3).unwrap().entangled, "cut {3} entangled")?;
    check(build_kspace(&vp).unwrap().dim() == 1, "dim K(⟨XZ1, ZX1⟩) ≠ 1")?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{:.2?}", t.elapsed()))
}

fn criterion2() -> Result<String, String> {
    let t = Instant::now();
    let mut cases = 0;
    for d in [2u32, 3, 5] {
        for n in 2..=20usize {
            let tag = format!("d={d} N={n}");
            let s = construct(n, d).map_err(|e| format!("{tag}: {e}"))?;
            check(validate(s.set()).passed(), format!("{tag}: validation failed"))?;
            check(is_genuinely_entangled(&s).unwrap().genuinely_entangled, format!("{tag}: not GE"))?;
            let k = k_min(n, d).unwrap();
            // oracle: smallest k with k(k-1)/2 ≥ ⌈(N-1)/(d-1)⌉, by direct search
            let c = (n - 1).div_ceil(d as usize - 1);
            let k_oracle = (1..).find(|k: &usize| k * (k - 1) / 2 >= c).unwrap();
            check(k == k_oracle && s.len() == k, format!("{tag}: {} generators, k_min {k}, oracle {k_oracle}", s.len()))?;
            let ks = build_kspace(&s).unwrap();
            check(ks.dim() == c, format!("{tag}: dim K {} ≠ {c}", ks.dim()))?;
            check(
                s.subspace_dimension().unwrap() == (d as u128).pow((n - k) as u32),
                format!("{tag}: dim V {}", s.subspace_dimension().unwrap()),
            )?;
            let u = expected_basis(n, d).unwrap();
            let ur = ZdMatrix::new(d, n, u.clone()).unwrap().rank().unwrap();
            let mut joint = ks.basis().clone();
            for v in u {
                joint.push(v).unwrap();
            }
            check(ur == c && joint.rank().unwrap() == c, format!("{tag}: span mismatch with u_i"))?;
            cases += 1;
        }
    }
    let u = expected_basis(5, 3).unwrap();
    check(
        u[0].entries() == [1, 1, 1, 0, 0] && u[1].entries() == [0, 0, 1, 1, 1],
        "(5,3) basis is not u_1=(1,1,1,0,0), u_2=(0,0,1,1,1)",
    )?;
    within(t.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{cases} cases, {:.2?}", t.elapsed()))
}

fn criterion3() -> Result<String, String> {
    let t = Instant::now();
    let mut total = 0;
    for (n, k) in [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)] {
        let r = scan(ScanKind::Theorem2, &ScanConfig::new(2, n, k).raw()).map_err(|e| format!("N={n} k={k}: {e}"))?;
        check(!r.truncated, format!("N={n} k={k}: truncated"))?;
        // independent restatement over the histogram: GE count = #(dim K = N-1)
        let full = r.dim_k_histogram.get(&(n - 1)).copied().unwrap_or(0);
        check(r.ge_count == full, format!("N={n} k={k}: {} GE vs {full} with dim K = N-1", r.ge_count))?;
        total += r.counted;
    }
    // the same iff, recomputed per set from the h pairing and the cut scan
    for s in stabspace_core::explorer::enumerate(&ScanConfig::new(2, 3, 2)).unwrap() {
        let c = theorem2_check(&s).unwrap();
        check(c.iff_consistent, format!("theorem2_check inconsistent on\n{s}"))?;
    }
    within(t.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{total} stabilizers, 0 violations, {:.2?}", t.elapsed()))
}

fn criterion4() -> Result<String, String> {
    let t = Instant::now();
    let mut runs = Vec::new();
    for n in 2..=5 {
        runs.push((2u32, n, 2usize));
    }
    for n in 2..=4 {
        runs.push((3, n, 2));
    }
    runs.push((2, 4, 3));
    let mut counted = 0;
    for (d, n, k) in runs {
        let tag = format!("d={d} N={n} k={k}");
        let r = scan(ScanKind::Conjecture1, &ScanConfig::new(d, n, k)).map_err(|e| format!("{tag}: {e}"))?;
        check(!r.truncated, format!("{tag}: truncated"))?;
        check(r.holds(), format!("{tag}: {} counterexamples", r.counterexamples.len()))?;
        let bound = conjecture1_bound(n, d).unwrap();
        check(r.ge_dim_k_histogram.keys().all(|&dk| dk >= bound), format!("{tag}: GE set below bound"))?;
        if k == 2 && n > d as usize {
            check(r.ge_count == 0, format!("{tag}: {} GE two-generator sets", r.ge_count))?;
        }
        counted += r.counted;
    }
    within(t.elapsed(), Duration::from_secs(1800))?;
    Ok(format!("{counted} row spaces, 0 violations, {:.2?}", t.elapsed()))
}

fn criterion5() -> Result<String, String> {
    let t = Instant::now();
    check((witness_bound(2, 1) - 2.0 * 2f64.sqrt()).abs() < 1e-12, "d=2 bound ≠ 2√2")?;
    check((witness_bound(3, 1) - 10f64.sqrt()).abs() < 1e-12, "d=3 bound ≠ √10")?;
    let cap = DenseCap::default();
    let cases = [
        ("⟨XXX,ZZZ⟩ d=3", stab(3, &["X X X", "Z Z Z"]), 27usize),
        ("GHZ3", stab(2, &["X X X", "Z Z I", "I Z Z"]), 8),
        ("S_max(4,2)", construct(4, 2).unwrap(), 16),
    ];
    let mut cuts = 0;
    for (name, s, dim) in &cases {
        check(cap.check(s.modulus(), s.num_sites()).unwrap() == *dim, format!("{name}: dimension"))?;
        let r = verify_npt(s, 20, 0, cap).map_err(|e| format!("{name}: {e}"))?;
        check(r.cuts.len() == (1 << (s.num_sites() - 1)) - 1, format!("{name}: cut count"))?;
        for c in &r.cuts {
            check(c.verdict == CutOutcome::Npt, format!("{name} cut {}: {:?}", c.mask, c.verdict))?;
            check(c.min_eig.len() == 20 && c.min_eig.iter().all(|&m| m < -1e-8), format!("{name} cut {}: PPT sample", c.mask))?;
            check(c.tr_b.iter().all(|&x| (x - 4.0).abs() <= 1e-9), format!("{name} cut {}: tr(Bρ) off 4", c.mask))?;
            let b = c.bound.unwrap();
            let tau = c.witness.unwrap().tau;
            let phi = 2.0 * std::f64::consts::PI * tau as f64 / s.modulus() as f64;
            let closed = 2.0 * (3.0 + phi.cos()).sqrt();
            check((b - closed).abs() < 1e-12 && b < 4.0, format!("{name} cut {}: bound {b}", c.mask))?;
            cuts += 1;
        }
        check(r.fully_npt, format!("{name}: not fully NPT"))?;
    }
    // rank-1 GHZ: samples with k % dimV + 1 = 1 are the GHZ state itself
    let ghz = &cases[1].1;
    let r = verify_npt(ghz, 20, 0, cap).unwrap();
    for c in &r.cuts {
        for &m in &c.min_eig {
            check((m + 0.5).abs() <= 1e-9, format!("GHZ cut {}: min eigenvalue {m}", c.mask))?;
        }
    }
    within(t.elapsed(), Duration::from_secs(120))?;
    Ok(format!("{cuts} cuts × 20 states, {:.2?}", t.elapsed()))
}

fn brute_sigma(u: &[u32], d: u32) -> Vec<u64> {
    let n = u.len();
    let mut counts = vec![0u64; d as usize];
    for phi in 0u32..(1 << n) {
        let beta: u32 = (0..n).filter(|&i| phi >> i & 1 == 1).map(|i| u[i]).sum::<u32>() % d;
        counts[beta as usize] += 1;
    }
    counts
}

fn criterion6() -> Result<String, String> {
    let t = Instant::now();
    let d = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 1..=12usize {
        for _ in 0..100 {
            let raw: Vec<u32> = (0..n).map(|_| rng.random_range(0..d)).collect();
            let u = ZdVector::new(d, raw.clone()).unwrap();
            let brute = brute_sigma(&raw, d);
            check(sigma_table(&u).unwrap() == brute, format!("σ table mismatch for {u}"))?;
            let min = *brute.iter().filter(|&&c| c > 0).min().unwrap();
            check(sigma_min(&u).unwrap() == min, format!("σ_min mismatch for {u}"))?;
            let bound = if n <= 2 { 1 } else { 1u64 << (n - 2) };
            check(min >= bound, format!("σ_min({u}) = {min} < {bound}"))?;
        }
    }
    within(t.elapsed(), Duration::from_secs(60))?;
    Ok(format!("1200 vectors, {:.2?}", t.elapsed()))
}

/// Reference matrix of ω^r ⊗ X^x Z^z built from explicit shift and clock
/// matrices and Kronecker products.
fn oracle_matrix(w: &PauliWord) -> DMatrix<Complex64> {
    let d = w.modulus() as usize;
    let omega = |k: usize| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % d) as f64 / d as f64);
    let shift = DMatrix::from_fn(d, d, |i, j| if i == (j + 1) % d { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
    let clock = DMatrix::from_fn(d, d, |i, j| if i == j { omega(i) } else { Complex64::new(0.0, 0.0) });
    let mut out = DMatrix::from_element(1, 1, omega(w.phase() as usize));
    for site in w.sites() {
        let local = shift.pow(site.x) * clock.pow(site.z);
        out = out.kronecker(&local);
    }
    out
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn random_word(rng: &mut ChaCha8Rng, d: u32, n: usize) -> PauliWord {
    let sites = (0..n).map(|_| SitePauli::new(rng.random_range(0..d), rng.random_range(0..d), d)).collect();
    PauliWord::new(d, rng.random_range(0..d), sites).unwrap()
}

fn criterion7() -> Result<String, String> {
    let t = Instant::now();
    let cap = DenseCap::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for d in [2u32, 3, 5] {
        for pair in 0..200 {
            let n = 1 + pair % 3;
            let a = random_word(&mut rng, d, n);
            let b = random_word(&mut rng, d, n);
            let (ma, mb) = (oracle_matrix(&a), oracle_matrix(&b));
            let mut err = max_diff(a.dense_matrix(cap).unwrap().matrix(), &ma);
            err = err.max(max_diff(&oracle_matrix(&a.multiply(&b).unwrap()), &(&ma * &mb)));
            let e = rng.random_range(0..2 * d as u64 + 2);
            let mut pow = DMatrix::identity(ma.nrows(), ma.ncols());
            for _ in 0..e {
                pow = &pow * &ma;
            }
            err = err.max(max_diff(&oracle_matrix(&a.power(e)), &pow));
            let tau = a.commutation_phase(&b).unwrap() as f64;
            let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * tau / d as f64);
            err = err.max(max_diff(&(&ma * &mb), &(&mb * &ma * omega)));
            check(err <= 1e-12, format!("d={d}: {a} vs {b}: deviation {err:e}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("600 pairs, max deviation {worst:.1e}, {:.2?}", t.elapsed()))
}

fn criterion8() -> Result<String, String> {
    let t = Instant::now();
    for n in 3..=6usize {
        let s = construct(n, 2).unwrap();
        let ks = build_kspace(&s).unwrap();
        check(lemma2_check(&s).unwrap(), format!("N={n}: lemma2_check failed"))?;
        // full enumeration of F_2^N against membership in K(S)
        let mut zero_sum = 0u64;
        for bits in 0u32..(1 << n) {
            let v = ZdVector::new(2, (0..n).map(|i| bits >> i & 1)).unwrap();
            let even = bits.count_ones() % 2 == 0;
            check(ks.contains(&v).unwrap() == even, format!("N={n}: membership of {v}"))?;
            zero_sum += even as u64;
        }
        check(zero_sum == 1 << (n - 1), format!("N={n}: {zero_sum} zero-sum vectors"))?;
        check(ks.dim() == n - 1, format!("N={n}: |K| = 2^{}", ks.dim()))?;
    }
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{:.2?}", t.elapsed()))
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("worked qutrit examples", criterion1),
        ("S_max grid", criterion2),
        ("d=2 iff, exhaustive", criterion3),
        ("dim K bound scans", criterion4),
        ("fully NPT, dense", criterion5),
        ("σ counting", criterion6),
        ("Pauli algebra vs dense", criterion7),
        ("zero-sum hyperplane", criterion8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
