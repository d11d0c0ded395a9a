use thiserror::Error;

use crate::stabilizer::ValidationReport;

/// Errors raised by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus {0} is not prime; Z_{0} is not a field")]
    NonPrimeModulus(u32),
    #[error("local dimension must be at least 2, got {0}")]
    InvalidDimension(u32),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("site set must be nonempty")]
    EmptySiteSet,
    #[error("site index {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("bipartition {0} is trivial")]
    TrivialBipartition(String),
    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("commutation vector needs two distinct generators, got {0} twice")]
    SameGenerator(usize),
    #[error("a generator set needs at least one generator")]
    EmptyGeneratorSet,
    #[error("too many sites ({0}); at most {1} supported")]
    TooManySites(usize, usize),
    #[error("dense dimension {dim} exceeds cap {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },
    #[error("operator is not hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("not a stabilizer: {}", .0.summary())]
    InvalidStabilizer(Box<ValidationReport>),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("generators {i} and {j} commute on the cut; witness inapplicable")]
    WitnessInapplicable { i: usize, j: usize },
    #[error("value overflows: {0}")]
    Overflow(String),
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
    #[error("{claim} violated by:\n{set}")]
    Violation { claim: String, set: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

/// Malformed generator text, with 1-based position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message} (near `{token}`)")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
