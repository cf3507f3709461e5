//! The three shipped models: positive naturals (well ordered), positive
//! rationals (symmetric, Archimedean) and positive reals as refinement
//! oracles (continuous at the oracle level).

mod element;
mod nat;
mod rat;
pub mod real;

pub use element::Element;
pub use nat::{nat_make, Nat};
pub use rat::{rat_make, PosRat};
pub use real::{real_add, real_approx, real_compare, real_from_rat, Interval, PosRealValue, RealOrdering};

pub(crate) use rat::{dyadic_ceil, dyadic_floor, pow2_neg};
