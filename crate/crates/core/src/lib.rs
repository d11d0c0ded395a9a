//! Qudit stabilizer subspaces: validation, entanglement criteria over
//! bipartitions, the commutation space K(S), the S_max family and dense
//! NPT checks.
//!
//! Local dimension d must be prime for anything that needs Z_d to be a
//! field. Sites are 1-based in text and 0-based in code unless noted.

pub mod bipartition;
pub mod dense;
pub mod entanglement;
pub mod error;
pub mod explorer;
pub mod kspace;
pub mod npt;
pub mod pauli;
pub mod smax;
pub mod stabilizer;
pub mod zd;

pub use bipartition::Bipartition;
pub use dense::{DenseCap, DenseOperator};
pub use entanglement::{is_entangled_wrt, is_genuinely_entangled, CutVerdict, GeVerdict, Witness};
pub use error::{Error, ParseError, Result};
pub use explorer::{ScanConfig, ScanKind, ScanReport};
pub use kspace::{build_kspace, conjecture1_bound, KSpace};
pub use npt::{verify_npt, NptReport};
pub use pauli::{PauliWord, SitePauli};
pub use smax::{construct, k_min};
pub use stabilizer::{validate, GeneratorSet, Stabilizer, ValidationReport};
pub use zd::{ZdMatrix, ZdVector};
