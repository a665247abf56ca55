//! Ordinal notations below Gamma_0, a decision engine for Sigma_1 stability
//! between ordinals, finite stability patterns with certified embeddings,
//! and a small finite model theory toolkit.

pub mod ordinal;

pub use ordinal::{Kind, Ordinal, OrdinalError, ParseError, PrincipalBelow, Term, VeblenTerm};
pub mod covering;
pub mod reach;
pub mod patterns;
pub mod model;
pub mod corpus;
pub mod suite;
