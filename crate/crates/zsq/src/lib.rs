//! Zero-sum sequences over a finite subset `G0 ⊂ Z^r`.
//!
//! Sequences are dense multiplicity vectors indexed by the ground set. The
//! crate covers supports and sums, atom enumeration (the Hilbert basis of the
//! kernel cone), Davenport constants, elementary atoms and their determinant
//! formula, upper bounds, the rational elementary decomposition, and the
//! hypercube constructions.

mod atoms;
mod bounds;
pub mod constructions;
mod decompose;
mod elementary;
mod ground;
mod seq;

pub use atoms::*;
pub use bounds::*;
pub use decompose::*;
pub use elementary::{
    delta_tuple, elementary_atoms, elementary_davenport, elementary_davenport_method, is_circuit, is_elementary,
    is_elementary_direct, unique_elementary_atom, ByEnumeration, ByFormula, ElementaryDavenport,
    ElementaryDavenportMethod, ELEMENTARY_DAVENPORT_METHODS,
};
pub use ground::*;
pub use seq::*;

#[derive(Debug, thiserror::Error)]
pub enum ZsqError {
    #[error("sequence has {got} entries but the ground set has {expected} elements")]
    GroundMismatch { expected: usize, got: usize },
    #[error("vector of dimension {got} where {expected} was required")]
    Dimension { expected: usize, got: usize },
    #[error("sequence is not zero-sum")]
    NotZeroSum,
    #[error("<G0> has rank {rank} < {r}; re-embed G0 into Z^{rank} first")]
    RankDeficient { rank: usize, r: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Linalg(#[from] zsl_linalg::LinalgError),
}
