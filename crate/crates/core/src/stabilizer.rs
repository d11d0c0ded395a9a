//! Generator sets, stabilizer validation and the stabilized subspace.
//!
//! Text format: a header `d=<int> n=<int>`, then one word per line in the
//! Pauli grammar. `#` starts a comment; blank lines are ignored.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dense::{DenseCap, DenseOperator, Monomial};
use crate::error::{Error, ParseError, Result};
use crate::pauli::{parse_word, PauliWord};
use crate::zd::{is_prime, ZdMatrix, ZdVector};

/// Kernel enumeration limit for the scalar check; beyond it only a kernel
/// basis is checked.
const KERNEL_ENUM_LIMIT: u64 = 1 << 20;

/// k Pauli words sharing (d, N).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSet {
    d: u32,
    n: usize,
    generators: Vec<PauliWord>,
}

impl GeneratorSet {
    pub fn new(generators: Vec<PauliWord>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyGeneratorSet)?;
        let (d, n) = (first.modulus(), first.num_sites());
        for g in &generators {
            if g.modulus() != d {
                return Err(Error::ModulusMismatch(d, g.modulus()));
            }
            if g.num_sites() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.num_sites() });
            }
        }
        Ok(Self { d, n, generators })
    }

    /// Parses words given inline, one per entry.
    pub fn parse_words<S: AsRef<str>>(d: u32, words: &[S]) -> Result<Self> {
        let gens = words
            .iter()
            .enumerate()
            .map(|(i, w)| parse_word(w.as_ref(), d, i + 1, 0))
            .collect::<Result<Vec<_>, ParseError>>()?;
        Self::new(gens)
    }

    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[PauliWord] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> Result<&PauliWord> {
        self.generators.get(i).ok_or(Error::GeneratorOutOfRange { index: i + 1, count: self.len() })
    }

    /// k × 2N matrix of (x | z) rows.
    pub fn symplectic_matrix(&self) -> Result<ZdMatrix> {
        let rows = self
            .generators
            .iter()
            .map(|g| ZdVector::new(self.d, g.symplectic_row()))
            .collect::<Result<Vec<_>>>()?;
        ZdMatrix::new(self.d, 2 * self.n, rows)
    }

    /// Parses the header-plus-words text format.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut header: Option<(u32, usize, usize)> = None;
        let mut gens = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let col = body.len() - body.trim_start().len();
            let Some((d, n, _)) = header else {
                header = Some(parse_header(body.trim(), line_no, col)?);
                continue;
            };
            let word = parse_word(body, d, line_no, 0)?;
            if word.num_sites() != n {
                return Err(ParseError {
                    line: line_no,
                    column: col + 1,
                    token: body.trim().to_string(),
                    message: format!("word has {} sites, header says n={n}", word.num_sites()),
                }
                .into());
            }
            gens.push(word);
        }
        let Some((_, _, hline)) = header else {
            return Err(ParseError { line: 1, column: 1, token: String::new(), message: "missing `d=<int> n=<int>` header".into() }.into());
        };
        if gens.is_empty() {
            return Err(ParseError { line: hline, column: 1, token: String::new(), message: "no generators after header".into() }.into());
        }
        Self::new(gens)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn parse_header(line: &str, line_no: usize, col: usize) -> Result<(u32, usize, usize), ParseError> {
    let err = |token: &str, message: &str| ParseError {
        line: line_no,
        column: col + 1,
        token: token.to_string(),
        message: message.to_string(),
    };
    let (mut d, mut n) = (None, None);
    for tok in line.split_whitespace() {
        let (key, val) = tok.split_once('=').ok_or_else(|| err(tok, "expected header `d=<int> n=<int>`"))?;
        match key {
            "d" => d = Some(val.parse::<u32>().map_err(|_| err(tok, "bad local dimension"))?),
            "n" => n = Some(val.parse::<usize>().map_err(|_| err(tok, "bad site count"))?),
            _ => return Err(err(tok, "unknown header key")),
        }
    }
    match (d, n) {
        (Some(d), Some(n)) if d >= 2 && n >= 1 => Ok((d, n, line_no)),
        (Some(_), Some(_)) => Err(err(line, "need d >= 2 and n >= 1")),
        _ => Err(err(line, "header needs both d and n")),
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d={} n={}", self.d, self.n)?;
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Commuting,
    Order,
    Independence,
    ScalarFree,
}

/// Where a check failed; generator numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureSite {
    Generator(usize),
    Pair(usize, usize),
    Combination(Vec<u32>),
    Set,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: Check,
    pub at: FailureSite,
    pub detail: String,
}

/// Outcome of [`validate`]. `independent` and `scalar_free` are `None` when
/// unsupported (non-prime d).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub commuting: bool,
    pub orders_ok: bool,
    pub independent: Option<bool>,
    pub scalar_free: Option<bool>,
    pub failures: Vec<Failure>,
}

impl ValidationReport {
    /// All four checks ran and passed.
    pub fn passed(&self) -> bool {
        self.commuting && self.orders_ok && self.independent == Some(true) && self.scalar_free == Some(true)
    }

    /// Passed every check that could run. For composite d this admits sets
    /// whose independence could not be decided.
    pub fn is_stabilizer(&self) -> bool {
        self.commuting && self.orders_ok && self.independent != Some(false) && self.scalar_free != Some(false)
    }

    pub fn summary(&self) -> String {
        if self.failures.is_empty() {
            return "ok".into();
        }
        self.failures.iter().map(|f| f.detail.as_str()).collect::<Vec<_>>().join("; ")
    }
}

/// Checks commutation, generator orders, independence and absence of
/// nontrivial scalars.
pub fn validate(set: &GeneratorSet) -> ValidationReport {
    let d = set.d;
    let gens = &set.generators;
    let mut failures = Vec::new();

    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let tau = gens[i].site_phase_total(&gens[j]);
            if tau != 0 {
                failures.push(Failure {
                    check: Check::Commuting,
                    at: FailureSite::Pair(i + 1, j + 1),
                    detail: format!("generators {} and {} do not commute (phase w^{tau})", i + 1, j + 1),
                });
            }
        }
    }
    let commuting = failures.is_empty();

    for (i, g) in gens.iter().enumerate() {
        if !g.power(d as u64).is_identity() {
            failures.push(Failure {
                check: Check::Order,
                at: FailureSite::Generator(i + 1),
                detail: format!("generator {} has order {}, not {d}", i + 1, g.order()),
            });
        }
    }
    let orders_ok = failures.iter().all(|f| f.check != Check::Order);

    let (independent, scalar_free) = if !is_prime(d) {
        failures.push(Failure {
            check: Check::Independence,
            at: FailureSite::Set,
            detail: format!("independence and scalar checks unsupported for non-prime d={d}"),
        });
        (None, None)
    } else {
        independence_checks(set, &mut failures)
    };

    ValidationReport { commuting, orders_ok, independent, scalar_free, failures }
}

fn independence_checks(set: &GeneratorSet, failures: &mut Vec<Failure>) -> (Option<bool>, Option<bool>) {
    let d = set.d;
    let m = set.symplectic_matrix().expect("shape checked at construction");
    let rank = m.rank().expect("prime modulus");
    let independent = rank == set.len();
    if independent {
        return (Some(true), Some(true));
    }
    failures.push(Failure {
        check: Check::Independence,
        at: FailureSite::Set,
        detail: format!("generator rows have rank {rank} < {}", set.len()),
    });
    // α with Σ α_i row_i = 0, i.e. the nullspace of the transpose
    let kernel = m.transpose().nullspace().expect("prime modulus");
    let dim = kernel.nrows() as u32;
    let combos: Vec<Vec<u32>> = match (d as u64).checked_pow(dim) {
        Some(total) if total <= KERNEL_ENUM_LIMIT => (1..total)
            .map(|mut code| {
                let mut alpha = vec![0u32; set.len()];
                for row in kernel.rows() {
                    let c = (code % d as u64) as u32;
                    code /= d as u64;
                    for (a, &e) in alpha.iter_mut().zip(row.entries()) {
                        *a = (*a + c * e) % d;
                    }
                }
                alpha
            })
            .collect(),
        _ => kernel.rows().iter().map(|r| r.entries().to_vec()).collect(),
    };
    let mut scalar_free = true;
    for alpha in combos {
        let mut acc = PauliWord::identity(d, set.n).expect("n >= 1");
        for (g, &a) in set.generators.iter().zip(&alpha) {
            acc = acc.multiply(&g.power(a as u64)).expect("shape checked");
        }
        debug_assert!(acc.is_scalar());
        if acc.phase() != 0 {
            scalar_free = false;
            failures.push(Failure {
                check: Check::ScalarFree,
                at: FailureSite::Combination(alpha.clone()),
                detail: format!("product with exponents {alpha:?} is the scalar w^{}", acc.phase()),
            });
            break;
        }
    }
    (Some(false), Some(scalar_free))
}

impl PauliWord {
    fn site_phase_total(&self, other: &PauliWord) -> u32 {
        self.commutation_phase(other).expect("shape checked at construction")
    }
}

/// A generator set known to pass [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Stabilizer {
    set: GeneratorSet,
}

impl Stabilizer {
    pub fn new(set: GeneratorSet) -> Result<Self> {
        let report = validate(&set);
        if !report.is_stabilizer() {
            return Err(Error::InvalidStabilizer(Box::new(report)));
        }
        Ok(Self { set })
    }

    /// Skips validation; for sets valid by construction.
    pub(crate) fn new_unchecked(set: GeneratorSet) -> Self {
        debug_assert!(validate(&set).is_stabilizer());
        Self { set }
    }

    pub fn generators(&self) -> &[PauliWord] {
        &self.set.generators
    }

    pub fn set(&self) -> &GeneratorSet {
        &self.set
    }

    pub fn into_set(self) -> GeneratorSet {
        self.set
    }

    pub fn modulus(&self) -> u32 {
        self.set.d
    }

    pub fn num_sites(&self) -> usize {
        self.set.n
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// d^(N-k); prime d only.
    pub fn subspace_dimension(&self) -> Result<u128> {
        subspace_dimension(self)
    }

    pub fn projector(&self, cap: DenseCap) -> Result<DenseOperator> {
        projector(self, cap)
    }
}

impl fmt::Display for Stabilizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.set.fmt(f)
    }
}

pub fn subspace_dimension(s: &Stabilizer) -> Result<u128> {
    let d = s.modulus();
    if !is_prime(d) {
        return Err(Error::NonPrimeModulus(d));
    }
    let exp = (s.num_sites() - s.len()) as u32;
    (d as u128).checked_pow(exp).ok_or_else(|| Error::Overflow(format!("{d}^{exp}")))
}

/// P = ∏_i (1/d) Σ_a G_i^a, each factor applied as a monomial matrix.
pub fn projector(s: &Stabilizer, cap: DenseCap) -> Result<DenseOperator> {
    let d = s.modulus();
    let dim = cap.check(d, s.num_sites())?;
    let mut p = DMatrix::<Complex64>::identity(dim, dim);
    let scale = Complex64::new(1.0 / d as f64, 0.0);
    for g in s.generators() {
        let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
        for a in 0..d {
            acc += Monomial::of(&g.power(a as u64), dim).apply_left(&p);
        }
        p = acc * scale;
    }
    DenseOperator::new(d as usize, s.num_sites(), p)
}
