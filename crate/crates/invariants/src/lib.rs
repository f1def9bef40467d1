//! Arithmetic of non-unique factorizations for monoids given by their atoms.
//!
//! Every computation runs against the object-safe [`Monoid`] trait, so the
//! same code serves block monoids and the structured models built elsewhere.
//! Elements are integer vectors whose meaning is up to the implementation.

mod factor;
mod monoid;
mod omega;
mod unions;

pub use factor::*;
pub use monoid::*;
pub use omega::*;
pub use unions::*;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("element does not lie in the monoid")]
    NotInMonoid,
    #[error("atom index {0} out of range")]
    NoSuchAtom(usize),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("unknown strategy `{name}` (expected one of: {known})")]
    UnknownStrategy { name: String, known: String },
    #[error("{0}")]
    Invalid(String),
}
