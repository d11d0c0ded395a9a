//! Exhaustive enumeration of small stabilizers for testing the GE criteria.
//!
//! Generators carry phase 0 throughout. No criterion here depends on
//! phases (τ, v_{i,j} and K(S) are built from exponents only), and a
//! commuting, independent phase-0 tuple whose generators have order d is
//! already a valid stabilizer, so nothing is lost.
//!
//! Raw mode walks every ordered k-tuple of words. Canonical mode walks each
//! symplectic row space once, through its reduced row echelon basis in
//! the column order (x_1..x_N | z_1..z_N). Every criterion is a property of
//! the row space, so canonical counts equal raw counts divided by
//! |GL(k, d)|.
//!
//! Work is split into shards: the pivot columns of the echelon basis in
//! canonical mode, the first generator in raw mode. Shards run in parallel
//! and are merged in shard order, so reports do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartition::Bipartition;
use crate::dense::DenseCap;
use crate::entanglement::is_genuinely_entangled;
use crate::error::{Error, Result};
use crate::kspace::{build_kspace, conjecture1_bound, ge_from_kspace};
use crate::pauli::{PauliWord, SitePauli};
use crate::stabilizer::{GeneratorSet, Stabilizer};
use crate::zd::{add_mod, mul_mod, require_prime, rref_raw, sub_mod};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
/// Shards per parallel batch between checkpoints.
const BATCH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub d: u32,
    pub n: usize,
    pub k: usize,
    pub canonicalize: bool,
    /// Stop after this many valid stabilizers.
    pub limit: Option<u64>,
    /// Maximum candidate tuples examined.
    pub budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl ScanConfig {
    pub fn new(d: u32, n: usize, k: usize) -> Self {
        Self { d, n, k, canonicalize: true, limit: None, budget: DEFAULT_BUDGET, threads: None }
    }

    pub fn raw(mut self) -> Self {
        self.canonicalize = false;
        self
    }

    fn check(&self) -> Result<()> {
        require_prime(self.d)?;
        if self.n == 0 || self.k == 0 {
            return Err(Error::Precondition("need N ≥ 1 and k ≥ 1".into()));
        }
        if 2 * self.n > 63 {
            return Err(Error::TooManySites(self.n, 31));
        }
        Ok(())
    }

    /// Candidate tuples a full scan would examine, if it fits in a u128.
    pub fn candidate_count(&self) -> Option<u128> {
        let d = self.d as u128;
        if self.canonicalize {
            pivot_sets(2 * self.n, self.k).iter().try_fold(0u128, |acc, p| {
                acc.checked_add(d.checked_pow(free_positions(p, 2 * self.n).len() as u32)?)
            })
        } else {
            d.checked_pow((2 * self.n * self.k) as u32)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shard {
    Pivots(Vec<usize>),
    First(u64),
}

fn pivot_sets(cols: usize, k: usize) -> Vec<Vec<usize>> {
    if k > cols {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] != i + cols - k) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Free (row, column) entries of an echelon basis with the given pivots.
fn free_positions(pivots: &[usize], cols: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in p + 1..cols {
            if !pivots.contains(&c) {
                out.push((r, c));
            }
        }
    }
    out
}

struct ShardPlan {
    config: ScanConfig,
    shards: Vec<Shard>,
}

impl ShardPlan {
    fn new(config: &ScanConfig) -> Result<Self> {
        config.check()?;
        let cols = 2 * config.n;
        let shards = if config.canonicalize {
            pivot_sets(cols, config.k).into_iter().map(Shard::Pivots).collect()
        } else {
            let words = (config.d as u64)
                .checked_pow(cols as u32)
                .ok_or_else(|| Error::Overflow(format!("{}^{cols} words", config.d)))?;
            (0..words).map(Shard::First).collect()
        };
        Ok(Self { config: config.clone(), shards })
    }

    fn shard_size(&self, shard: &Shard) -> u64 {
        let d = self.config.d as u64;
        let cols = 2 * self.config.n;
        match shard {
            Shard::Pivots(p) => d.saturating_pow(free_positions(p, cols).len() as u32),
            Shard::First(_) => d.saturating_pow((cols * (self.config.k - 1)) as u32),
        }
    }

    /// Calls `visit` on every valid stabilizer among the first `take`
    /// candidates of `shard`.
    fn walk(&self, shard: &Shard, take: u64, mut visit: impl FnMut(Stabilizer)) {
        let c = &self.config;
        let d = c.d;
        let cols = 2 * c.n;
        let mut rows = vec![vec![0u32; cols]; c.k];
        match shard {
            Shard::Pivots(pivots) => {
                let free = free_positions(pivots, cols);
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r].iter_mut().for_each(|e| *e = 0);
                    rows[r][p] = 1;
                }
                for t in 0..take {
                    let mut code = t;
                    for &(r, col) in &free {
                        rows[r][col] = (code % d as u64) as u32;
                        code /= d as u64;
                    }
                    if rows_are_stabilizer(&rows, c.n, d, false) {
                        visit(rows_to_stabilizer(&rows, c.n, d));
                    }
                }
            }
            Shard::First(w) => {
                decode_word(*w, d, &mut rows[0]);
                let per_word = (d as u64).pow(cols as u32);
                for t in 0..take {
                    let mut code = t;
                    for row in rows.iter_mut().skip(1) {
                        decode_word(code % per_word, d, row);
                        code /= per_word;
                    }
                    if rows_are_stabilizer(&rows, c.n, d, true) {
                        visit(rows_to_stabilizer(&rows, c.n, d));
                    }
                }
            }
        }
    }
}

fn decode_word(mut code: u64, d: u32, row: &mut [u32]) {
    for e in row.iter_mut() {
        *e = (code % d as u64) as u32;
        code /= d as u64;
    }
}

/// Commuting, order-d, independent. Independent rows with phase 0 cannot
/// multiply to a nontrivial scalar, so this is the full stabilizer test.
fn rows_are_stabilizer(rows: &[Vec<u32>], n: usize, d: u32, check_rank: bool) -> bool {
    let tri = ((d as u64 * (d as u64 - 1) / 2) % d as u64) as u32;
    for row in rows {
        let xz = (0..n).fold(0, |acc, s| add_mod(acc, mul_mod(row[s], row[n + s], d), d));
        if mul_mod(xz, tri, d) != 0 {
            return false;
        }
    }
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (a, b) = (&rows[i], &rows[j]);
            let tau = (0..n).fold(0, |acc, s| {
                add_mod(acc, sub_mod(mul_mod(b[s], a[n + s], d), mul_mod(a[s], b[n + s], d), d), d)
            });
            if tau != 0 {
                return false;
            }
        }
    }
    !check_rank || rref_raw(d, 2 * n, rows.to_vec()).0.len() == rows.len()
}

fn rows_to_stabilizer(rows: &[Vec<u32>], n: usize, d: u32) -> Stabilizer {
    let gens = rows
        .iter()
        .map(|r| {
            PauliWord::new(d, 0, (0..n).map(|s| SitePauli { x: r[s], z: r[n + s] }).collect())
                .expect("n ≥ 1, d ≥ 2")
        })
        .collect();
    Stabilizer::new_unchecked(GeneratorSet::new(gens).expect("uniform shape"))
}

/// Sequential stream of valid stabilizers.
pub struct Enumeration {
    plan: ShardPlan,
    shard: usize,
    buffer: std::vec::IntoIter<Stabilizer>,
    used: u64,
    emitted: u64,
    truncated: bool,
}

impl Enumeration {
    /// Whether the budget or limit cut the stream short. Meaningful once
    /// the iterator is exhausted.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn candidates_examined(&self) -> u64 {
        self.used
    }
}

impl Iterator for Enumeration {
    type Item = Stabilizer;

    fn next(&mut self) -> Option<Stabilizer> {
        loop {
            if self.plan.config.limit.is_some_and(|l| self.emitted >= l) {
                self.truncated = self.truncated || self.buffer.len() > 0 || self.shard < self.plan.shards.len();
                return None;
            }
            if let Some(s) = self.buffer.next() {
                self.emitted += 1;
                return Some(s);
            }
            if self.shard >= self.plan.shards.len() {
                return None;
            }
            let shard = &self.plan.shards[self.shard];
            let size = self.plan.shard_size(shard);
            let take = size.min(self.plan.config.budget.saturating_sub(self.used));
            if take < size {
                self.truncated = true;
            }
            if take == 0 {
                self.shard = self.plan.shards.len();
                return None;
            }
            let mut found = Vec::new();
            self.plan.walk(shard, take, |s| found.push(s));
            self.used += take;
            self.buffer = found.into_iter();
            self.shard = if take < size { self.plan.shards.len() } else { self.shard + 1 };
        }
    }
}

/// All valid phase-0 stabilizers for `config`, in shard order.
pub fn enumerate(config: &ScanConfig) -> Result<Enumeration> {
    Ok(Enumeration {
        plan: ShardPlan::new(config)?,
        shard: 0,
        buffer: Vec::new().into_iter(),
        used: 0,
        emitted: 0,
        truncated: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    /// GE ⇒ dim K ≥ ⌈(N-1)/(d-1)⌉; a k = 2 failure is fatal.
    Conjecture1,
    /// d = 2: GE ⇔ dim K = N-1; any failure is fatal.
    Theorem2,
}

impl ScanKind {
    fn as_str(&self) -> &'static str {
        match self {
            ScanKind::Conjecture1 => "conjecture1",
            ScanKind::Theorem2 => "theorem2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub generators: Vec<String>,
    pub dim_k: usize,
    /// GE confirmed from dense restricted commutators; `None` when over cap.
    pub dense_verified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanReport {
    pub check: ScanKind,
    pub d: u32,
    pub n: usize,
    pub k: usize,
    pub canonical: bool,
    pub bound: usize,
    pub candidates: u64,
    pub counted: u64,
    pub ge_count: u64,
    pub dim_k_histogram: BTreeMap<usize, u64>,
    pub ge_dim_k_histogram: BTreeMap<usize, u64>,
    pub counterexamples: Vec<Counterexample>,
    pub truncated: bool,
    pub shards_completed: usize,
}

impl ScanReport {
    fn empty(kind: ScanKind, c: &ScanConfig) -> Self {
        Self {
            check: kind,
            d: c.d,
            n: c.n,
            k: c.k,
            canonical: c.canonicalize,
            bound: conjecture1_bound(c.n, c.d).unwrap_or(0),
            candidates: 0,
            counted: 0,
            ge_count: 0,
            dim_k_histogram: BTreeMap::new(),
            ge_dim_k_histogram: BTreeMap::new(),
            counterexamples: Vec::new(),
            truncated: false,
            shards_completed: 0,
        }
    }

    /// No recorded counterexample on the scanned slice.
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Per-stabilizer outcome, merged in shard order.
struct Outcome {
    ge: bool,
    dim_k: usize,
    counterexample: Option<Counterexample>,
}

fn assess(kind: ScanKind, s: &Stabilizer, bound: usize, cap: DenseCap) -> Result<Outcome> {
    let ks = build_kspace(s)?;
    let dim_k = ks.dim();
    let n = s.num_sites();
    let words = || s.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>();
    match kind {
        ScanKind::Conjecture1 => {
            let ge = is_genuinely_entangled(s)?.genuinely_entangled;
            if !ge || dim_k >= bound {
                return Ok(Outcome { ge, dim_k, counterexample: None });
            }
            if s.len() == 2 {
                return Err(Error::Violation {
                    claim: format!("two-generator bound dim K ≥ {bound}"),
                    set: s.to_string(),
                });
            }
            let dense = dense_ge(s, cap)?;
            if dense == Some(false) {
                return Err(Error::Inconsistency(format!("dense GE oracle disagrees on\n{s}")));
            }
            Ok(Outcome { ge, dim_k, counterexample: Some(Counterexample { generators: words(), dim_k, dense_verified: dense }) })
        }
        ScanKind::Theorem2 => {
            let ge = ge_from_kspace(&ks);
            if ge != is_genuinely_entangled(s)?.genuinely_entangled {
                return Err(Error::Inconsistency(format!("K-space and commutation GE verdicts differ on\n{s}")));
            }
            if ge != (dim_k + 1 == n) {
                return Err(Error::Violation { claim: format!("GE ⇔ dim K = {} at d = 2", n - 1), set: s.to_string() });
            }
            Ok(Outcome { ge, dim_k, counterexample: None })
        }
    }
}

/// GE from explicit restricted matrices: for every cut some pair of
/// restricted generators must fail to commute as matrices.
fn dense_ge(s: &Stabilizer, cap: DenseCap) -> Result<Option<bool>> {
    let n = s.num_sites();
    if cap.check(s.modulus(), n).is_err() {
        return Ok(None);
    }
    let gens = s.generators();
    for q in Bipartition::canonical_cuts(n) {
        let sites = q.q_sites();
        let mats = gens
            .iter()
            .map(|g| g.restrict(&sites)?.dense_matrix(cap))
            .collect::<Result<Vec<_>>>()?;
        let mut detected = false;
        'pairs: for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                let ab = mats[i].matrix() * mats[j].matrix();
                let ba = mats[j].matrix() * mats[i].matrix();
                if (ab - ba).iter().any(|e| e.norm() > 1e-9) {
                    detected = true;
                    break 'pairs;
                }
            }
        }
        if !detected {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

/// Runs a scan without checkpointing.
pub fn scan(kind: ScanKind, config: &ScanConfig) -> Result<ScanReport> {
    scan_resumable(kind, config, None, false)
}

/// Every enumerated GE stabilizer must satisfy dim K ≥ ⌈(N-1)/(d-1)⌉.
pub fn scan_conjecture1(config: &ScanConfig) -> Result<ScanReport> {
    scan(ScanKind::Conjecture1, config)
}

/// d = 2 only: GE ⇔ dim K = N-1 on every enumerated stabilizer.
pub fn scan_theorem2(config: &ScanConfig) -> Result<ScanReport> {
    if config.d != 2 {
        return Err(Error::Precondition(format!("theorem2 scan needs d = 2, got {}", config.d)));
    }
    scan(ScanKind::Theorem2, config)
}

/// Scan with an optional plain-text checkpoint written after every batch
/// of shards. With `resume`, an existing checkpoint for the same
/// configuration is loaded and scanning continues after its last
/// completed shard.
pub fn scan_resumable(kind: ScanKind, config: &ScanConfig, checkpoint: Option<&Path>, resume: bool) -> Result<ScanReport> {
    if kind == ScanKind::Theorem2 && config.d != 2 {
        return Err(Error::Precondition(format!("theorem2 scan needs d = 2, got {}", config.d)));
    }
    let plan = ShardPlan::new(config)?;
    let mut report = ScanReport::empty(kind, config);
    if let (Some(path), true) = (checkpoint, resume) {
        if path.exists() {
            report = read_checkpoint(path, kind, config)?;
        }
    }
    let pool = match config.threads {
        Some(t) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Precondition(e.to_string()))?,
        ),
        None => None,
    };
    let cap = DenseCap::default();
    let bound = report.bound;

    let mut next = report.shards_completed;
    while next < plan.shards.len() && !report.truncated {
        // fix this batch's per-shard budgets up front so the split is
        // independent of scheduling
        let mut used = report.candidates;
        let mut batch = Vec::new();
        for shard in &plan.shards[next..(next + BATCH).min(plan.shards.len())] {
            let size = plan.shard_size(shard);
            let take = size.min(config.budget.saturating_sub(used));
            if take == 0 {
                break;
            }
            used += take;
            batch.push((shard, take, take < size));
            if take < size {
                break;
            }
        }
        if batch.is_empty() {
            report.truncated = true;
            break;
        }
        let run = || {
            batch
                .par_iter()
                .map(|&(shard, take, _)| {
                    let mut out = Vec::new();
                    let mut err = None;
                    plan.walk(shard, take, |s| {
                        if err.is_none() {
                            match assess(kind, &s, bound, cap) {
                                Ok(o) => out.push(o),
                                Err(e) => err = Some(e),
                            }
                        }
                    });
                    match err {
                        Some(e) => Err(e),
                        None => Ok(out),
                    }
                })
                .collect::<Vec<Result<Vec<Outcome>>>>()
        };
        let results = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };
        for ((_, take, partial), res) in batch.iter().zip(results) {
            for o in res? {
                if config.limit.is_some_and(|l| report.counted >= l) {
                    report.truncated = true;
                    break;
                }
                report.counted += 1;
                *report.dim_k_histogram.entry(o.dim_k).or_default() += 1;
                if o.ge {
                    report.ge_count += 1;
                    *report.ge_dim_k_histogram.entry(o.dim_k).or_default() += 1;
                }
                report.counterexamples.extend(o.counterexample);
            }
            report.candidates += take;
            if *partial {
                report.truncated = true;
            }
            if report.truncated {
                break;
            }
            report.shards_completed += 1;
        }
        next = report.shards_completed;
        if let Some(path) = checkpoint {
            write_checkpoint(path, &report, config)?;
        }
    }
    Ok(report)
}

fn config_line(kind: ScanKind, c: &ScanConfig) -> String {
    format!(
        "check={} d={} n={} k={} canonical={} budget={} limit={}",
        kind.as_str(),
        c.d,
        c.n,
        c.k,
        c.canonicalize,
        c.budget,
        c.limit.map_or("none".to_string(), |l| l.to_string())
    )
}

fn write_checkpoint(path: &Path, r: &ScanReport, c: &ScanConfig) -> Result<()> {
    let mut text = String::from("# stabspace scan checkpoint\n");
    let hist = |h: &BTreeMap<usize, u64>| h.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(",");
    let _ = writeln!(text, "config {}", config_line(r.check, c));
    let _ = writeln!(text, "last_completed_prefix={}", r.shards_completed as i64 - 1);
    let _ = writeln!(text, "candidates={}", r.candidates);
    let _ = writeln!(text, "counted={}", r.counted);
    let _ = writeln!(text, "ge_count={}", r.ge_count);
    let _ = writeln!(text, "truncated={}", r.truncated);
    let _ = writeln!(text, "dimk={}", hist(&r.dim_k_histogram));
    let _ = writeln!(text, "ge_dimk={}", hist(&r.ge_dim_k_histogram));
    for cx in &r.counterexamples {
        let dense = match cx.dense_verified {
            Some(true) => "yes",
            Some(false) => "no",
            None => "unknown",
        };
        let _ = writeln!(text, "counterexample={}|{}|{}", cx.dim_k, dense, cx.generators.join(";"));
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text).map_err(|e| Error::Checkpoint(e.to_string()))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::Checkpoint(e.to_string()))
}

fn read_checkpoint(path: &Path, kind: ScanKind, c: &ScanConfig) -> Result<ScanReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let bad = |what: &str| Error::Checkpoint(format!("{}: bad {what}", path.display()));
    let mut r = ScanReport::empty(kind, c);
    let mut saw_config = false;
    let parse_hist = |v: &str| -> Result<BTreeMap<usize, u64>> {
        v.split(',')
            .filter(|s| !s.is_empty())
            .map(|kv| {
                let (k, v) = kv.split_once(':').ok_or_else(|| bad("histogram"))?;
                Ok((k.parse().map_err(|_| bad("histogram"))?, v.parse().map_err(|_| bad("histogram"))?))
            })
            .collect()
    };
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        if let Some(cfg) = line.strip_prefix("config ") {
            if cfg != config_line(kind, c) {
                return Err(Error::Checkpoint(format!("configuration mismatch: checkpoint has `{cfg}`")));
            }
            saw_config = true;
            continue;
        }
        let (key, val) = line.split_once('=').ok_or_else(|| bad("line"))?;
        match key {
            "last_completed_prefix" => {
                let last: i64 = val.parse().map_err(|_| bad("prefix"))?;
                r.shards_completed = (last + 1).max(0) as usize;
            }
            "candidates" => r.candidates = val.parse().map_err(|_| bad("candidates"))?,
            "counted" => r.counted = val.parse().map_err(|_| bad("counted"))?,
            "ge_count" => r.ge_count = val.parse().map_err(|_| bad("ge_count"))?,
            "truncated" => r.truncated = val.parse().map_err(|_| bad("truncated"))?,
            "dimk" => r.dim_k_histogram = parse_hist(val)?,
            "ge_dimk" => r.ge_dim_k_histogram = parse_hist(val)?,
            "counterexample" => {
                let mut parts = val.splitn(3, '|');
                let dim_k = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("counterexample"))?;
                let dense_verified = match parts.next() {
                    Some("yes") => Some(true),
                    Some("no") => Some(false),
                    Some("unknown") => None,
                    _ => return Err(bad("counterexample")),
                };
                let generators = parts.next().ok_or_else(|| bad("counterexample"))?.split(';').map(str::to_string).collect();
                r.counterexamples.push(Counterexample { generators, dim_k, dense_verified });
            }
            _ => return Err(bad(key)),
        }
    }
    if !saw_config {
        return Err(bad("config"));
    }
    Ok(r)
}

/// |GL(k, d)|: ordered bases of a k-dimensional space over Z_d.
pub fn ordered_bases(k: usize, d: u32) -> u128 {
    let q = d as u128;
    (0..k as u32).map(|i| q.pow(k as u32) - q.pow(i)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pivot_sets_are_combinations() {
        assert_eq!(pivot_sets(4, 2).len(), 6);
        assert_eq!(pivot_sets(4, 2)[0], vec![0, 1]);
        assert_eq!(pivot_sets(4, 2)[5], vec![2, 3]);
        assert!(pivot_sets(2, 3).is_empty());
    }

    #[test]
    fn canonical_count_is_gaussian_binomial() {
        // [4 choose 2]_2 = 35 two-dimensional subspaces of F_2^4
        assert_eq!(ScanConfig::new(2, 2, 2).candidate_count(), Some(35));
        assert_eq!(ScanConfig::new(2, 2, 2).raw().candidate_count(), Some(256));
    }

    #[test]
    fn single_generator_two_qubits() {
        let sets: Vec<Stabilizer> = enumerate(&ScanConfig::new(2, 2, 1).raw()).unwrap().collect();
        let texts: Vec<String> = sets.iter().map(|s| s.generators()[0].to_string()).collect();
        assert_eq!(sets.len(), 9);
        for w in ["X I", "Z Z", "XZ XZ"] {
            assert!(texts.contains(&w.to_string()), "{w}");
        }
        assert!(!texts.contains(&"XZ I".to_string()));
    }

    #[test]
    fn no_two_generator_single_qubit() {
        assert_eq!(enumerate(&ScanConfig::new(2, 1, 2).raw()).unwrap().count(), 0);
        assert_eq!(enumerate(&ScanConfig::new(2, 1, 2)).unwrap().count(), 0);
    }

    #[test]
    fn base_case_enumerated() {
        let target = GeneratorSet::parse_words(3, &["X X2", "Z Z"]).unwrap();
        let found = enumerate(&ScanConfig::new(3, 2, 2).raw())
            .unwrap()
            .any(|s| s.set() == &target);
        assert!(found);
    }

    #[test]
    fn budget_and_limit_truncate() {
        let mut cfg = ScanConfig::new(2, 2, 2).raw();
        cfg.budget = 100;
        let mut e = enumerate(&cfg).unwrap();
        e.by_ref().count();
        assert!(e.truncated());
        assert_eq!(e.candidates_examined(), 100);

        let mut cfg = ScanConfig::new(2, 2, 1);
        cfg.limit = Some(3);
        let mut e = enumerate(&cfg).unwrap();
        assert_eq!(e.by_ref().count(), 3);
        assert!(e.truncated());

        let r = scan(ScanKind::Conjecture1, &cfg).unwrap();
        assert_eq!(r.counted, 3);
        assert!(r.truncated);
    }

    #[test]
    fn scan_examples() {
        let r = scan_conjecture1(&ScanConfig::new(2, 3, 2)).unwrap();
        assert_eq!(r.ge_count, 0);
        assert!(r.counted > 0 && r.holds());

        let r = scan_conjecture1(&ScanConfig::new(3, 3, 2)).unwrap();
        assert!(r.ge_count > 0 && r.holds());
        assert_eq!(r.ge_dim_k_histogram.keys().copied().collect::<Vec<_>>(), vec![1]);

        let r = scan_theorem2(&ScanConfig::new(2, 3, 1)).unwrap();
        assert_eq!(r.ge_count, 0);
        assert_eq!(r.dim_k_histogram, BTreeMap::from([(0, r.counted)]));
        assert!(scan_theorem2(&ScanConfig::new(3, 2, 2)).is_err());
    }

    #[test]
    fn raw_and_canonical_agree() {
        for k in 1..=3 {
            let canon = scan_theorem2(&ScanConfig::new(2, 2, k)).unwrap();
            let raw = scan_theorem2(&ScanConfig::new(2, 2, k).raw()).unwrap();
            let g = ordered_bases(k, 2) as u64;
            assert_eq!(raw.counted, canon.counted * g, "k={k}");
            assert_eq!(raw.ge_count, canon.ge_count * g);
            let scaled: BTreeMap<usize, u64> = canon.dim_k_histogram.iter().map(|(&a, &b)| (a, b * g)).collect();
            assert_eq!(raw.dim_k_histogram, scaled);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let mut a = ScanConfig::new(3, 3, 2);
        a.threads = Some(1);
        let mut b = a.clone();
        b.threads = Some(4);
        assert_eq!(scan_conjecture1(&a).unwrap(), scan_conjecture1(&b).unwrap());
    }
}
