//! Magnitude spaces: positive ordered semigroups without zero, the Eudoxus
//! theory of ratios over them, and the positive reals rebuilt from embeddings.
//!
//! The crate ships three concrete models (positive naturals, positive
//! rationals and positive reals given as interval-refinement oracles) and
//! builds everything else generically on top of the additive structure:
//! integral multiples, ratio comparison with certifying witnesses, fourth
//! proportionals, the embedding space `H(M, M')`, products, quotients and
//! powers. The [`laws`] module turns the classical theorems into seeded
//! property checks.

pub mod cli;
pub mod embed;
mod error;
pub mod hom;
pub mod laws;
pub mod models;
pub mod power;
pub mod ratio;
pub mod space;

pub use error::MagnitudeError;
pub use models::{Element, Interval, Nat, PosRat, PosRealValue};
pub use space::{Certified, ExactMagnitude, Magnitude, ModelDescriptor, ModelId, Ordering3};

pub type Result<T, E = MagnitudeError> = std::result::Result<T, E>;
