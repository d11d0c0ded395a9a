//! The recursive family S_max(N, d): genuinely entangled stabilizers with
//! k_min(N, d) generators and dim K = ⌈(N-1)/(d-1)⌉.
//!
//! Base case N = 2 is ⟨X ⊗ X^{d-1}, Z ⊗ Z⟩. Growing N by one site either
//! adds a generator (when k_min increases) or folds the new site into
//! generator l and the last generator. P_i is X for odd i and Z for even i.
//! All phases stay 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kspace::conjecture1_bound;
use crate::pauli::{PauliWord, SitePauli};
use crate::stabilizer::{validate, GeneratorSet, Stabilizer};
use crate::zd::{require_prime, ZdVector};

/// Smallest k with k(k-1)/2 ≥ `bound`.
pub fn k_min_for_bound(bound: usize) -> usize {
    let mut k = 1;
    while k * (k - 1) / 2 < bound {
        k += 1;
    }
    k
}

/// ⌈(1 + √(1 + 8c)) / 2⌉ in exact integer arithmetic.
fn k_min_closed_form(c: usize) -> usize {
    let s = 1 + 8 * c as u128;
    let r = s.isqrt();
    let k = if r * r == s {
        // s is odd, so r is odd and (1 + r) / 2 is exact
        r.div_ceil(2)
    } else if r % 2 == 1 {
        (r + 3) / 2
    } else {
        (r + 2) / 2
    };
    k as usize
}

/// Minimal generator count for a GE stabilizer under the conjectured bound.
pub fn k_min(n: usize, d: u32) -> Result<usize> {
    if n < 2 {
        return Err(Error::Precondition(format!("N must be at least 2, got {n}")));
    }
    let c = conjecture1_bound(n, d)?;
    let closed = k_min_closed_form(c);
    let searched = k_min_for_bound(c);
    if closed != searched {
        return Err(Error::Inconsistency(format!("k_min({n},{d}): closed form {closed} vs search {searched}")));
    }
    Ok(closed)
}

/// Largest m ≥ 0 with ⌈(N-1-m)/(d-1)⌉ = ⌈(N-1)/(d-1)⌉.
pub fn m_of(n: usize, d: u32) -> Result<usize> {
    let c = conjecture1_bound(n, d)?;
    let dm1 = d as usize - 1;
    let mut m = 0;
    while m < n - 1 && (n - 2 - m).div_ceil(dm1) == c {
        m += 1;
    }
    Ok(m)
}

/// l(N) = k(k-1)/2 + 1 - ⌈(N-1)/(d-1)⌉.
pub fn l_of(n: usize, d: u32) -> Result<usize> {
    let k = k_min(n, d)?;
    let c = conjecture1_bound(n, d)?;
    (k * (k - 1) / 2 + 1)
        .checked_sub(c)
        .ok_or_else(|| Error::Inconsistency(format!("l({n},{d}) negative")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Base,
    /// k(N-1) = k(N) - 1: a new generator P_k ⊗ P_k is appended.
    NewGenerator,
    /// k(N-1) = k(N): generator l absorbs the new site.
    SameCount,
}

/// Bookkeeping for one recursion step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmaxParams {
    pub n: usize,
    pub d: u32,
    pub k: usize,
    pub bound: usize,
    pub branch: Branch,
    pub l: Option<usize>,
    pub m: Option<usize>,
}

impl SmaxParams {
    pub fn new(n: usize, d: u32) -> Result<Self> {
        require_prime(d)?;
        let k = k_min(n, d)?;
        let bound = conjecture1_bound(n, d)?;
        if n == 2 {
            return Ok(Self { n, d, k, bound, branch: Branch::Base, l: None, m: None });
        }
        let prev = k_min(n - 1, d)?;
        if prev + 1 == k {
            Ok(Self { n, d, k, bound, branch: Branch::NewGenerator, l: None, m: None })
        } else if prev == k {
            let l = l_of(n, d)?;
            if !(1..k).contains(&l) {
                return Err(Error::Inconsistency(format!("l({n},{d}) = {l} outside 1..{}", k - 1)));
            }
            Ok(Self { n, d, k, bound, branch: Branch::SameCount, l: Some(l), m: Some(m_of(n, d)?) })
        } else {
            Err(Error::Inconsistency(format!("k_min jumps from {prev} to {k} at N={n}")))
        }
    }
}

/// P_i^p as a site factor (1-based i).
fn p_site(i: usize, p: usize, d: u32) -> SitePauli {
    let p = (p % d as usize) as u32;
    if i % 2 == 1 {
        SitePauli::x_pow(p, d)
    } else {
        SitePauli::z_pow(p, d)
    }
}

/// One recursion step from the generators on N-1 sites.
fn grow(prev: &[PauliWord], params: &SmaxParams) -> Result<Vec<PauliWord>> {
    let (n, d, k) = (params.n, params.d, params.k);
    let id = SitePauli::I;
    let mut next = Vec::with_capacity(k);
    match params.branch {
        Branch::Base => unreachable!("base case has no predecessor"),
        Branch::NewGenerator => {
            for (idx, g) in prev.iter().enumerate() {
                let i = idx + 1;
                next.push(if i == k - 1 { g.pushed(p_site(k - 1, d as usize - 1, d)) } else { g.pushed(id) });
            }
            let mut sites = vec![id; n - 2];
            sites.push(p_site(k, 1, d));
            sites.push(p_site(k, 1, d));
            next.push(PauliWord::new(d, 0, sites)?);
        }
        Branch::SameCount => {
            let l = params.l.expect("same-count step has l");
            let m = params.m.expect("same-count step has m");
            for (idx, g) in prev.iter().enumerate() {
                let i = idx + 1;
                next.push(if i == l {
                    let mut shift = vec![id; n - 2];
                    shift.push(p_site(k - 1, m + 1, d));
                    let tilde = g.multiply(&PauliWord::new(d, 0, shift)?)?.with_phase(0);
                    tilde.pushed(p_site(k - 1, d as usize - 1 - m, d))
                } else if i == k {
                    g.pushed(p_site(k, 1, d))
                } else {
                    g.pushed(id)
                });
            }
        }
    }
    Ok(next)
}

/// Generators of S_max(N, d), validated.
pub fn construct(n: usize, d: u32) -> Result<Stabilizer> {
    require_prime(d)?;
    if n < 2 {
        return Err(Error::Precondition(format!("N must be at least 2, got {n}")));
    }
    let mut gens = vec![
        PauliWord::new(d, 0, vec![SitePauli::x_pow(1, d), SitePauli::x_pow(d - 1, d)])?,
        PauliWord::new(d, 0, vec![SitePauli::z_pow(1, d), SitePauli::z_pow(1, d)])?,
    ];
    for step in 3..=n {
        let params = SmaxParams::new(step, d)?;
        gens = grow(&gens, &params)?;
        debug_assert_eq!(gens.len(), params.k);
    }
    let set = GeneratorSet::new(gens)?;
    let report = validate(&set);
    if !report.passed() {
        return Err(Error::Inconsistency(format!("S_max({n},{d}) failed validation: {}", report.summary())));
    }
    Ok(Stabilizer::new_unchecked(set))
}

/// The basis u_1..u_c of K(S_max): windows of d-1+1 ones overlapping by one
/// site, the last padded with a = c(d-1) - (N-1) + 1 at site N.
pub fn expected_basis(n: usize, d: u32) -> Result<Vec<ZdVector>> {
    require_prime(d)?;
    if n < 2 {
        return Err(Error::Precondition(format!("N must be at least 2, got {n}")));
    }
    let c = conjecture1_bound(n, d)?;
    let dm1 = d as usize - 1;
    let a = c * dm1 + 1 - (n - 1);
    let mut basis = Vec::with_capacity(c);
    for i in 1..=c {
        let mut e = vec![0u32; n];
        let start = (i - 1) * dm1 + 1;
        if i < c {
            for j in start..=i * dm1 + 1 {
                e[j - 1] = 1;
            }
        } else {
            for j in start..n {
                e[j - 1] = 1;
            }
            e[n - 1] = (a % d as usize) as u32;
        }
        basis.push(ZdVector::new(d, e)?);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kspace::build_kspace;
    use crate::zd::ZdMatrix;

    fn words(s: &Stabilizer) -> Vec<String> {
        s.generators().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn k_min_examples() {
        for d in [2, 3, 5, 7] {
            assert_eq!(k_min(2, d).unwrap(), 2);
        }
        assert_eq!(k_min(3, 2).unwrap(), 3);
        assert_eq!(k_min(4, 2).unwrap(), 3);
        assert_eq!(k_min(3, 3).unwrap(), 2);
        assert_eq!(k_min(5, 3).unwrap(), 3);
    }

    #[test]
    fn closed_form_agrees_with_search() {
        for c in 0..20_000 {
            assert_eq!(k_min_closed_form(c), k_min_for_bound(c).max(1), "c={c}");
        }
    }

    #[test]
    fn m_and_l() {
        assert_eq!(m_of(3, 3).unwrap(), 1);
        assert_eq!(l_of(3, 3).unwrap(), 1);
        // between jumps of k, l runs down through every index once per
        // d-1 sites; at d = 2 the jump step itself uses up l = k-1
        for d in [2u32, 3, 5] {
            let mut n = 3;
            while n < 40 {
                let p = SmaxParams::new(n, d).unwrap();
                if p.branch == Branch::NewGenerator {
                    // collect l over the window with constant k
                    let mut ls = Vec::new();
                    let mut m = n + 1;
                    while m < 60 && SmaxParams::new(m, d).unwrap().branch == Branch::SameCount {
                        ls.push(l_of(m, d).unwrap());
                        m += 1;
                    }
                    if m < 60 && !ls.is_empty() {
                        assert!(ls.windows(2).all(|w| w[0] >= w[1]), "d={d} N={n}");
                        ls.dedup();
                        ls.reverse();
                        let top = if d == 2 { p.k - 2 } else { p.k - 1 };
                        assert_eq!(ls, (1..=top).collect::<Vec<_>>(), "d={d} N={n}");
                    }
                }
                n += 1;
            }
        }
    }

    #[test]
    fn construct_examples() {
        assert_eq!(words(&construct(2, 3).unwrap()), ["X X2", "Z Z"]);
        assert_eq!(words(&construct(3, 3).unwrap()), ["X X X", "Z Z Z"]);
        assert_eq!(words(&construct(2, 2).unwrap()), ["X X", "Z Z"]);
        assert!(construct(1, 3).is_err());
        assert_eq!(construct(3, 4), Err(Error::NonPrimeModulus(4)));
    }

    #[test]
    fn expected_basis_examples() {
        let b = expected_basis(5, 3).unwrap();
        assert_eq!(b[0].entries(), &[1, 1, 1, 0, 0]);
        assert_eq!(b[1].entries(), &[0, 0, 1, 1, 1]);
        for d in [2, 3, 5, 7] {
            let b = expected_basis(2, d).unwrap();
            assert_eq!(b.len(), 1);
            assert_eq!(b[0].entries(), &[1, d - 1]);
        }
        let b: Vec<Vec<u32>> = expected_basis(4, 2).unwrap().iter().map(|v| v.entries().to_vec()).collect();
        assert_eq!(b, vec![vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1]]);
    }

    #[test]
    fn kspace_spans_expected_basis() {
        for d in [2, 3, 5] {
            for n in 2..=12 {
                let ks = build_kspace(&construct(n, d).unwrap()).unwrap();
                let u = expected_basis(n, d).unwrap();
                let mut both = ks.basis().clone();
                for v in &u {
                    both.push(v.clone()).unwrap();
                }
                let ur = ZdMatrix::new(d, n, u).unwrap().rank().unwrap();
                assert_eq!(ks.dim(), ur);
                assert_eq!(both.rank().unwrap(), ur, "d={d} N={n}");
            }
        }
    }
}
