//! Executable models of structured monoids, each implementing
//! [`zsl_invariants::Monoid`] so that closed-form invariants can be compared
//! with the engine's brute-force values.

pub mod acm;
pub mod fp;
pub mod group;
pub mod hnp;
pub mod monext;
pub mod zss;

pub use acm::*;
pub use fp::*;
pub use group::FiniteAbelianGroup;
pub use hnp::*;
pub use monext::*;
pub use zss::*;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("invalid input: {0}")]
    Spec(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Invariant(#[from] zsl_invariants::InvariantError),
    #[error(transparent)]
    Zsq(#[from] zsl_zsq::ZsqError),
    #[error(transparent)]
    Linalg(#[from] zsl_linalg::LinalgError),
}
