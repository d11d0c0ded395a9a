//! Numerical checks of the NPT characterization on desk-scale instances.
//!
//! For a cut where the subspace is entangled, every sampled state supported
//! on V must have a partial transpose with a negative eigenvalue, and the
//! witness B = G_i + G_i† + G_j + G_j† must read exactly 4 on it while any
//! PPT state is bounded by 2√(3 + cos(2πτ/d)) < 4. For a cut where V is not
//! entangled, a product state inside V is exhibited instead.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartition::Bipartition;
use crate::dense::{DenseCap, DenseOperator};
use crate::entanglement::{is_entangled_wrt, Witness};
use crate::error::{Error, Result};
use crate::stabilizer::Stabilizer;

/// A cut is NPT when the minimum eigenvalue is below `-NPT_TOL`.
pub const NPT_TOL: f64 = 1e-8;
/// A state is PPT when the minimum eigenvalue is at least `-PPT_TOL`.
pub const PPT_TOL: f64 = 1e-9;
/// |tr(Bρ) - 4| allowed on the stabilized subspace.
pub const WITNESS_TOL: f64 = 1e-9;
/// Overlap a product state must reach with V.
pub const PRODUCT_FIDELITY: f64 = 1.0 - 1e-6;
pub const DEFAULT_SAMPLES: usize = 20;

/// ρ = P W W† P / tr(·) with W a seeded complex Gaussian d^N × r matrix.
pub fn random_state_on(s: &Stabilizer, seed: u64, rank: usize, cap: DenseCap) -> Result<DenseOperator> {
    let p = s.projector(cap)?;
    let dim_v = projector_rank(&p);
    random_state_with_projector(&p, dim_v, seed, rank)
}

fn projector_rank(p: &DenseOperator) -> usize {
    p.trace().re.round() as usize
}

fn random_state_with_projector(p: &DenseOperator, dim_v: usize, seed: u64, rank: usize) -> Result<DenseOperator> {
    if rank == 0 || rank > dim_v {
        return Err(Error::Precondition(format!("rank {rank} outside 1..={dim_v}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = p.dim();
    let w = DMatrix::<Complex64>::from_fn(dim, rank, |_, _| {
        Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    });
    let a = p.matrix() * w;
    let mut rho = &a * a.adjoint();
    let tr = rho.trace().re;
    rho /= Complex64::new(tr, 0.0);
    // symmetrize away rounding so spectral routines accept it
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(p.with_matrix(rho))
}

/// 2√(3 + cos(2πτ/d)).
pub fn witness_bound(d: u32, tau: u32) -> f64 {
    let phi = 2.0 * std::f64::consts::PI * (tau % d) as f64 / d as f64;
    2.0 * (3.0 + phi.cos()).sqrt()
}

/// The witness B for generators `i`, `j` (0-based) and its PPT bound on Q.
pub fn b_witness(s: &Stabilizer, i: usize, j: usize, q: &Bipartition, cap: DenseCap) -> Result<(DenseOperator, f64)> {
    let gi = s.set().generator(i)?;
    let gj = s.set().generator(j)?;
    let tau = gi.commutation_phase_on(gj, q)?;
    if tau == 0 {
        return Err(Error::WitnessInapplicable { i: i + 1, j: j + 1 });
    }
    let a = gi.dense_matrix(cap)?;
    let b = gj.dense_matrix(cap)?;
    let sum = a.matrix() + a.matrix().adjoint() + b.matrix() + b.matrix().adjoint();
    Ok((a.with_matrix(sum), witness_bound(s.modulus(), tau)))
}

/// Product state found by [`max_product_fidelity`].
#[derive(Debug, Clone)]
pub struct ProductState {
    /// ⟨ψ|P|ψ⟩ for the best product ψ found.
    pub fidelity: f64,
    /// The full product vector, big-endian site order.
    pub state: DVector<Complex64>,
}

/// Maximizes ⟨ψ_Q ⊗ ψ_Q̄|P|ψ_Q ⊗ ψ_Q̄⟩ by alternating top-eigenvector
/// updates of each factor, from several seeded starts.
pub fn max_product_fidelity(p: &DenseOperator, q: &Bipartition, seed: u64) -> Result<ProductState> {
    if q.is_trivial() {
        return Err(Error::TrivialBipartition(q.to_string()));
    }
    if q.sites() != p.sites() {
        return Err(Error::DimensionMismatch { expected: p.sites(), found: q.sites() });
    }
    let layout = CutLayout::new(p.local_dim(), q);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ProductState> = None;
    for _ in 0..16 {
        let mut b = random_unit(layout.dim_b, &mut rng);
        let mut a = DVector::zeros(layout.dim_a);
        let mut fid = -1.0f64;
        for _ in 0..2000 {
            let (fa, va) = top_eigen(&layout.reduce_b(p.matrix(), &b));
            a = va;
            let (fb, vb) = top_eigen(&layout.reduce_a(p.matrix(), &a));
            b = vb;
            let gain = fb - fid;
            fid = fb.max(fa);
            if gain.abs() < 1e-15 || fid > 1.0 - 1e-14 {
                break;
            }
        }
        let state = layout.join(&a, &b);
        let cand = ProductState { fidelity: fid, state };
        if best.as_ref().is_none_or(|b| cand.fidelity > b.fidelity) {
            best = Some(cand);
        }
        if fid > 1.0 - 1e-12 {
            break;
        }
    }
    Ok(best.expect("at least one restart"))
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> DVector<Complex64> {
    let v = DVector::<Complex64>::from_fn(dim, |_, _| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)));
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

fn top_eigen(m: &DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let (idx, val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i, *v))
        .expect("nonempty");
    (val, eig.eigenvectors.column(idx).into_owned())
}

/// Index bookkeeping for H_Q ⊗ H_Q̄ inside the big-endian full space.
struct CutLayout {
    dim_a: usize,
    dim_b: usize,
    /// full[a * dim_b + b]
    full: Vec<usize>,
}

impl CutLayout {
    fn new(d: usize, q: &Bipartition) -> Self {
        let qs = q.q_sites();
        let qbar = q.complement_sites();
        let n = q.sites();
        let dim_a = d.pow(qs.len() as u32);
        let dim_b = d.pow(qbar.len() as u32);
        let weight = |s: usize| d.pow((n - 1 - s) as u32);
        let spread = |mut idx: usize, sites: &[usize]| {
            let mut out = 0;
            for &s in sites.iter().rev() {
                out += (idx % d) * weight(s);
                idx /= d;
            }
            out
        };
        let mut full = Vec::with_capacity(dim_a * dim_b);
        for a in 0..dim_a {
            let fa = spread(a, &qs);
            for b in 0..dim_b {
                full.push(fa + spread(b, &qbar));
            }
        }
        Self { dim_a, dim_b, full }
    }

    fn at(&self, a: usize, b: usize) -> usize {
        self.full[a * self.dim_b + b]
    }

    /// (1 ⊗ ψ_b)† P (1 ⊗ ψ_b)
    fn reduce_b(&self, p: &DMatrix<Complex64>, psi: &DVector<Complex64>) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim_a, self.dim_a, |a, a2| {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..self.dim_b {
                let cb = psi[b].conj();
                if cb.norm_sqr() == 0.0 {
                    continue;
                }
                let row = self.at(a, b);
                for b2 in 0..self.dim_b {
                    acc += cb * p[(row, self.at(a2, b2))] * psi[b2];
                }
            }
            acc
        })
    }

    /// (ψ_a ⊗ 1)† P (ψ_a ⊗ 1)
    fn reduce_a(&self, p: &DMatrix<Complex64>, psi: &DVector<Complex64>) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim_b, self.dim_b, |b, b2| {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..self.dim_a {
                let ca = psi[a].conj();
                if ca.norm_sqr() == 0.0 {
                    continue;
                }
                let row = self.at(a, b);
                for a2 in 0..self.dim_a {
                    acc += ca * p[(row, self.at(a2, b2))] * psi[a2];
                }
            }
            acc
        })
    }

    fn join(&self, a: &DVector<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.full.len());
        for i in 0..self.dim_a {
            for j in 0..self.dim_b {
                out[self.at(i, j)] = a[i] * b[j];
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutOutcome {
    /// Entangled cut; every sampled state was NPT and read B = 4.
    Npt,
    /// Separable cut; a product state in V with PPT transpose was found.
    PptExample,
    /// Entangled cut where a sampled state failed a check.
    Violation,
    /// Separable cut where no product state reached the fidelity target.
    OracleFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CutReport {
    pub mask: String,
    pub entangled: bool,
    pub witness: Option<Witness>,
    pub min_eig: Vec<f64>,
    pub tr_b: Vec<f64>,
    pub bound: Option<f64>,
    pub product_fidelity: Option<f64>,
    pub verdict: CutOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NptReport {
    pub d: u32,
    pub n: usize,
    pub dim_v: usize,
    pub samples: usize,
    pub seed: u64,
    pub cuts: Vec<CutReport>,
    /// Every cut entangled and NPT on all samples.
    pub fully_npt: bool,
    /// No cut produced a violation or oracle failure.
    pub consistent: bool,
}

/// Runs every canonical cut against `samples` seeded states. Ranks cycle
/// through 1..=dim V.
pub fn verify_npt(s: &Stabilizer, samples: usize, seed: u64, cap: DenseCap) -> Result<NptReport> {
    let n = s.num_sites();
    if n < 2 {
        return Err(Error::Precondition("need at least two sites".into()));
    }
    let p = s.projector(cap)?;
    let dim_v = projector_rank(&p);
    let states = (0..samples)
        .into_par_iter()
        .map(|k| random_state_with_projector(&p, dim_v, seed.wrapping_add(k as u64), k % dim_v + 1))
        .collect::<Result<Vec<_>>>()?;
    let cuts: Vec<Bipartition> = Bipartition::canonical_cuts(n).collect();
    let reports = cuts
        .par_iter()
        .map(|q| cut_report(s, &p, &states, q, seed, cap))
        .collect::<Result<Vec<_>>>()?;
    let fully_npt = reports.iter().all(|r| r.verdict == CutOutcome::Npt);
    let consistent = reports.iter().all(|r| matches!(r.verdict, CutOutcome::Npt | CutOutcome::PptExample));
    Ok(NptReport { d: s.modulus(), n, dim_v, samples, seed, cuts: reports, fully_npt, consistent })
}

fn cut_report(
    s: &Stabilizer,
    p: &DenseOperator,
    states: &[DenseOperator],
    q: &Bipartition,
    seed: u64,
    cap: DenseCap,
) -> Result<CutReport> {
    let verdict = is_entangled_wrt(s, q)?;
    if let Some(w) = verdict.witness {
        let (b, bound) = b_witness(s, w.i - 1, w.j - 1, q, cap)?;
        let rows = states
            .par_iter()
            .map(|rho| {
                let min = rho.partial_transpose(q)?.min_eigenvalue()?;
                let tr = (b.matrix() * rho.matrix()).trace().re;
                Ok((min, tr))
            })
            .collect::<Result<Vec<_>>>()?;
        let (min_eig, tr_b): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
        let ok = bound < 4.0
            && min_eig.iter().all(|&m| m < -NPT_TOL)
            && tr_b.iter().all(|&t| (t - 4.0).abs() <= WITNESS_TOL);
        return Ok(CutReport {
            mask: q.to_string(),
            entangled: true,
            witness: Some(w),
            min_eig,
            tr_b,
            bound: Some(bound),
            product_fidelity: None,
            verdict: if ok { CutOutcome::Npt } else { CutOutcome::Violation },
        });
    }
    let prod = max_product_fidelity(p, q, seed ^ q.mask())?;
    let psi = &prod.state;
    let rho = p.with_matrix(psi * psi.adjoint());
    let min = rho.partial_transpose(q)?.min_eigenvalue()?;
    let found = prod.fidelity > PRODUCT_FIDELITY && min >= -PPT_TOL;
    Ok(CutReport {
        mask: q.to_string(),
        entangled: false,
        witness: None,
        min_eig: vec![min],
        tr_b: Vec::new(),
        bound: None,
        product_fidelity: Some(prod.fidelity),
        verdict: if found { CutOutcome::PptExample } else { CutOutcome::OracleFailed },
    })
}
