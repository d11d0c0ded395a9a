//! Symplectic representation of the generalized Pauli group on N qudits.
//!
//! A word is `ω^r ⊗_n X^{x_n} Z^{z_n}` with every exponent in Z_d. The phase
//! group is exactly ⟨ω⟩, so at d = 2 the single-site word XZ squares to -1
//! and fails stabilizer order checks downstream.
//!
//! Text form: whitespace-separated site tokens `I`, `X`, `Z`, `X<a>`, `Z<b>`,
//! `X<a>Z<b>` (exponents optional), with an optional leading `w<r>` for the
//! global phase, e.g. `w1 X2Z1 I Z`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bipartition::Bipartition;
use crate::dense::{DenseCap, DenseOperator};
use crate::error::{Error, ParseError, Result};
use crate::zd::{add_mod, mul_mod, sub_mod};

/// Single-site factor X^x Z^z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SitePauli {
    pub x: u32,
    pub z: u32,
}

impl SitePauli {
    pub const I: SitePauli = SitePauli { x: 0, z: 0 };

    pub fn new(x: u32, z: u32, d: u32) -> Self {
        Self { x: x % d, z: z % d }
    }

    pub fn x_pow(x: u32, d: u32) -> Self {
        Self::new(x, 0, d)
    }

    pub fn z_pow(z: u32, d: u32) -> Self {
        Self::new(0, z, d)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// τ with `self · other = ω^τ other · self` on this site.
    #[inline]
    pub fn commutation(&self, other: &SitePauli, d: u32) -> u32 {
        sub_mod(mul_mod(other.x, self.z, d), mul_mod(self.x, other.z, d), d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliWord {
    d: u32,
    phase: u32,
    sites: Vec<SitePauli>,
}

impl PauliWord {
    pub fn new(d: u32, phase: u32, sites: Vec<SitePauli>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if sites.is_empty() {
            return Err(Error::EmptySiteSet);
        }
        let sites = sites.into_iter().map(|s| SitePauli::new(s.x, s.z, d)).collect();
        Ok(Self { d, phase: phase % d, sites })
    }

    /// Builds a phase-0 word from (x, z) exponent pairs.
    pub fn from_exponents(d: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        Self::new(d, 0, pairs.iter().map(|&(x, z)| SitePauli { x, z }).collect())
    }

    pub fn identity(d: u32, n: usize) -> Result<Self> {
        Self::new(d, 0, vec![SitePauli::I; n])
    }

    pub fn parse(text: &str, d: u32) -> Result<Self, ParseError> {
        parse_word(text, d, 1, 0)
    }

    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[SitePauli] {
        &self.sites
    }

    pub fn site(&self, n: usize) -> SitePauli {
        self.sites[n]
    }

    pub fn with_phase(mut self, phase: u32) -> Self {
        self.phase = phase % self.d;
        self
    }

    /// True when every site is identity (the phase may be anything).
    pub fn is_scalar(&self) -> bool {
        self.sites.iter().all(SitePauli::is_identity)
    }

    /// Identity with phase 0.
    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_scalar()
    }

    /// Row (x_1..x_N | z_1..z_N) of the symplectic generator matrix.
    pub fn symplectic_row(&self) -> Vec<u32> {
        self.sites.iter().map(|s| s.x).chain(self.sites.iter().map(|s| s.z)).collect()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::ModulusMismatch(self.d, other.d));
        }
        if self.sites.len() != other.sites.len() {
            return Err(Error::DimensionMismatch { expected: self.sites.len(), found: other.sites.len() });
        }
        Ok(())
    }

    /// Group product `self · other`; moving every X of `other` left past the
    /// Z of `self` on the same site contributes ω^{x_B z_A}.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let d = self.d;
        let mut phase = add_mod(self.phase, other.phase, d);
        let sites = self
            .sites
            .iter()
            .zip(&other.sites)
            .map(|(a, b)| {
                phase = add_mod(phase, mul_mod(b.x, a.z, d), d);
                SitePauli { x: add_mod(a.x, b.x, d), z: add_mod(a.z, b.z, d) }
            })
            .collect();
        Ok(Self { d, phase, sites })
    }

    /// `self^a`. The phase is `a r + (Σ x z) a(a-1)/2`, with the triangular
    /// number formed exactly before reduction.
    pub fn power(&self, a: u64) -> Self {
        let d = self.d as u128;
        let a_mod = (a as u128 % d) as u32;
        let tri = ((a as u128 * (a as u128).saturating_sub(1)) / 2 % d) as u32;
        let xz = self.sites.iter().fold(0, |acc, s| add_mod(acc, mul_mod(s.x, s.z, self.d), self.d));
        let phase = add_mod(mul_mod(a_mod, self.phase, self.d), mul_mod(xz, tri, self.d), self.d);
        let sites = self
            .sites
            .iter()
            .map(|s| SitePauli { x: mul_mod(s.x, a_mod, self.d), z: mul_mod(s.z, a_mod, self.d) })
            .collect();
        Self { d: self.d, phase, sites }
    }

    /// Smallest a ≥ 1 with `self^a` the phase-0 identity.
    pub fn order(&self) -> u64 {
        // the order divides d^2 in this group
        let bound = self.d as u64 * self.d as u64;
        (1..=bound).find(|&a| self.power(a).is_identity()).unwrap_or(bound)
    }

    /// τ over every site.
    pub fn commutation_phase(&self, other: &Self) -> Result<u32> {
        self.check_same_shape(other)?;
        Ok(self.phase_over(other, |_| true))
    }

    /// τ restricted to the sites of Q: `A^(Q) B^(Q) = ω^τ B^(Q) A^(Q)`.
    pub fn commutation_phase_on(&self, other: &Self, q: &Bipartition) -> Result<u32> {
        self.check_same_shape(other)?;
        if q.sites() != self.sites.len() {
            return Err(Error::DimensionMismatch { expected: self.sites.len(), found: q.sites() });
        }
        Ok(self.phase_over(other, |n| q.contains(n)))
    }

    /// Per-site τ for 0-based site `n`.
    pub fn site_commutation(&self, other: &Self, n: usize) -> u32 {
        self.sites[n].commutation(&other.sites[n], self.d)
    }

    fn phase_over(&self, other: &Self, keep: impl Fn(usize) -> bool) -> u32 {
        let d = self.d;
        self.sites
            .iter()
            .zip(&other.sites)
            .enumerate()
            .filter(|(n, _)| keep(*n))
            .fold(0, |acc, (_, (a, b))| add_mod(acc, a.commutation(b, d), d))
    }

    /// Tensor factor on the given 0-based sites; the phase stays with it.
    pub fn restrict(&self, q: &[usize]) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::EmptySiteSet);
        }
        let sites = q
            .iter()
            .map(|&n| {
                self.sites.get(n).copied().ok_or(Error::SiteOutOfRange { site: n + 1, sites: self.sites.len() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { d: self.d, phase: self.phase, sites })
    }

    /// `self ⊗ other`, phases added.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::ModulusMismatch(self.d, other.d));
        }
        let mut sites = self.sites.clone();
        sites.extend_from_slice(&other.sites);
        Ok(Self { d: self.d, phase: add_mod(self.phase, other.phase, self.d), sites })
    }

    /// Appends one site factor.
    pub fn pushed(&self, site: SitePauli) -> Self {
        let mut w = self.clone();
        w.sites.push(SitePauli::new(site.x, site.z, self.d));
        w
    }

    /// Explicit d^N × d^N matrix, sites big-endian.
    pub fn dense_matrix(&self, cap: DenseCap) -> Result<DenseOperator> {
        DenseOperator::from_word(self, cap)
    }
}

impl fmt::Display for SitePauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        if self.x != 0 {
            f.write_str("X")?;
            if self.x != 1 {
                write!(f, "{}", self.x)?;
            }
        }
        if self.z != 0 {
            f.write_str("Z")?;
            if self.z != 1 {
                write!(f, "{}", self.z)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            write!(f, "w{} ", self.phase)?;
        }
        for (i, s) in self.sites.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Parses one word. `line` and `col_offset` only position diagnostics.
pub(crate) fn parse_word(text: &str, d: u32, line: usize, col_offset: usize) -> Result<PauliWord, ParseError> {
    let err = |column: usize, token: &str, message: &str| ParseError {
        line,
        column: column + col_offset,
        token: token.to_string(),
        message: message.to_string(),
    };
    if d < 2 {
        return Err(err(1, text, "local dimension must be at least 2"));
    }
    let mut phase = 0u32;
    let mut sites = Vec::new();
    let mut first = true;
    for (start, token) in tokens(text) {
        let column = start + 1;
        if first && token.starts_with('w') {
            let digits = &token[1..];
            phase = if digits.is_empty() {
                1
            } else {
                parse_exponent(digits).ok_or_else(|| err(column, token, "bad phase exponent"))?
            };
            first = false;
            continue;
        }
        first = false;
        sites.push(parse_site(token, d).ok_or_else(|| err(column, token, "expected I, X<a>, Z<b> or X<a>Z<b>"))?);
    }
    if sites.is_empty() {
        return Err(err(1, text.trim(), "word has no sites"));
    }
    Ok(PauliWord { d, phase: phase % d, sites })
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
}

fn parse_exponent(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<u64>().ok().map(|v| v.min(u32::MAX as u64) as u32)
}

fn parse_site(token: &str, d: u32) -> Option<SitePauli> {
    if token == "I" {
        return Some(SitePauli::I);
    }
    let (mut x, mut z) = (0u64, 0u64);
    let mut rest = token;
    let mut any = false;
    if let Some(r) = rest.strip_prefix('X') {
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        x = if end == 0 { 1 } else { r[..end].parse().ok()? };
        rest = &r[end..];
        any = true;
    }
    if let Some(r) = rest.strip_prefix('Z') {
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        z = if end == 0 { 1 } else { r[..end].parse().ok()? };
        rest = &r[end..];
        any = true;
    }
    if !any || !rest.is_empty() {
        return None;
    }
    Some(SitePauli { x: (x % d as u64) as u32, z: (z % d as u64) as u32 })
}
