//! Exact statistics of the right branch of binary trees.
//!
//! The crate counts binary trees of size `n` (internal nodes) by the number
//! of edges on their right branch, using four independent routes:
//!
//! - exhaustive enumeration ([`trees::enumerate`]),
//! - the level recurrence induced by the node-insertion step ([`stats::dist_recurrence`]),
//! - coefficient extraction from `z^(k+1) N(z)^k` ([`stats::dist_series`]),
//! - the ballot-number closed form ([`stats::dist_closed`]).
//!
//! [`asymptotics`] derives the limiting fractions `k / 2^(k+1)` by exact
//! differentiation at the characteristic root, and [`cli`] exposes all of it
//! as the `spinestat` command.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod ratio;
pub mod series;
pub mod stats;
pub mod trees;

pub use error::{Error, Result};
pub use ratio::ExactRatio;

/// Arbitrary-precision nonnegative tree count.
pub type Count = num_bigint::BigUint;
