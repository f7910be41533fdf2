//! Exact covering counts and dimension estimates for the popcorn (Thomae)
//! function graph and the full popcorn set
//! `F = {(p/q, 1/q)} ∪ [0, 1] x {0}`.
//!
//! Everything that can be exact is: fractions are reduced integer pairs or
//! big rationals, grid counts are integers, and the inequality checks in
//! [`analysis`] compare rationals. Floating point appears only in the final
//! log-log regressions.

pub mod analysis;
pub mod covering;
pub mod error;
pub mod fraction;
pub mod intervals;
pub mod numtheory;
pub mod par;
pub mod popcorn;

pub use error::{PopcornError, Result};
pub use fraction::ReducedFraction;
