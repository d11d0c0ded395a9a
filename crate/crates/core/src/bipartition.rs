use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest site count a mask can address.
pub const MAX_SITES: usize = 63;

/// A cut Q|Q̄ of the sites {1, …, N}.
///
/// The mask is big-endian: site 1 is the most significant of the `N` bits,
/// matching the printed bit string (site 1 leftmost, '1' marks Q) and the
/// dense tensor ordering. Canonical cuts have site 1 in Q̄, so canonical
/// masks are exactly `1 .. 2^(N-1)` and integer order is string order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipartition {
    sites: usize,
    mask: u64,
}

impl Bipartition {
    pub fn from_mask(sites: usize, mask: u64) -> Result<Self> {
        if sites == 0 || sites > MAX_SITES {
            return Err(Error::TooManySites(sites, MAX_SITES));
        }
        if mask >> sites != 0 {
            return Err(Error::SiteOutOfRange { site: 64 - mask.leading_zeros() as usize, sites });
        }
        Ok(Self { sites, mask })
    }

    /// Cut with Q given as 1-based site numbers.
    pub fn from_sites(sites: usize, q: &[usize]) -> Result<Self> {
        let mut b = Self::from_mask(sites, 0)?;
        for &s in q {
            if s == 0 || s > sites {
                return Err(Error::SiteOutOfRange { site: s, sites });
            }
            b.mask |= b.bit(s - 1);
        }
        Ok(b)
    }

    #[inline]
    fn bit(&self, site: usize) -> u64 {
        1u64 << (self.sites - 1 - site)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Whether 0-based `site` lies in Q.
    #[inline]
    pub fn contains(&self, site: usize) -> bool {
        self.mask & self.bit(site) != 0
    }

    /// 0-based indices of Q.
    pub fn q_sites(&self) -> Vec<usize> {
        (0..self.sites).filter(|&s| self.contains(s)).collect()
    }

    /// 0-based indices of Q̄.
    pub fn complement_sites(&self) -> Vec<usize> {
        (0..self.sites).filter(|&s| !self.contains(s)).collect()
    }

    fn full(&self) -> u64 {
        if self.sites == 64 {
            u64::MAX
        } else {
            (1u64 << self.sites) - 1
        }
    }

    pub fn complement(&self) -> Self {
        Self { sites: self.sites, mask: !self.mask & self.full() }
    }

    pub fn is_trivial(&self) -> bool {
        self.mask == 0 || self.mask == self.full()
    }

    /// The representative with site 1 in Q̄.
    pub fn canonical(&self) -> Self {
        if self.contains(0) {
            self.complement()
        } else {
            *self
        }
    }

    pub fn is_canonical(&self) -> bool {
        !self.contains(0)
    }

    /// The φ ∈ F_{N,2} representation as 0/1 entries in site order.
    pub fn indicator(&self) -> Vec<u32> {
        (0..self.sites).map(|s| self.contains(s) as u32).collect()
    }

    /// All 2^(N-1) - 1 canonical nontrivial cuts in ascending mask order.
    pub fn canonical_cuts(sites: usize) -> impl DoubleEndedIterator<Item = Bipartition> {
        assert!((1..=MAX_SITES).contains(&sites), "site count {sites} unsupported");
        (1..(1u64 << (sites - 1))).map(move |mask| Bipartition { sites, mask })
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in 0..self.sites {
            f.write_str(if self.contains(s) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    /// Parses a bit string, site 1 leftmost.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut mask = 0u64;
        for (i, c) in s.chars().enumerate() {
            mask <<= 1;
            match c {
                '0' => {}
                '1' => mask |= 1,
                _ => {
                    return Err(crate::error::ParseError {
                        line: 1,
                        column: i + 1,
                        token: c.to_string(),
                        message: "bipartition must be a string of 0 and 1".into(),
                    }
                    .into())
                }
            }
        }
        Self::from_mask(s.len(), mask)
    }
}
