//! Antichains in the Boolean lattice `2^[n]` in which every occurring level
//! carries at least `r` members.
//!
//! - [`family`]: subsets as machine words, families, and the antichain and
//!   multiplicity predicates.
//! - [`bounds`]: closed-form level bounds and thresholds in exact arithmetic.
//! - [`construct`]: the explicit construction reaching `n - 3` levels.
//! - [`search`]: exhaustive backtracking over exact level profiles, the
//!   maximum-level computation and threshold certification.
//! - [`cert`]: the certificate text format, verification and corpus
//!   regeneration.

pub mod bounds;
pub mod cert;
pub mod colex;
pub mod construct;
pub mod error;
pub mod family;
pub mod search;

pub use error::{Error, Result};
pub use family::{classify_two_sets, Family, GroundSize, LevelProfile, SubsetCode, TwoSetShape};

pub const TOOL_VERSION: &str = concat!("antichain-", env!("CARGO_PKG_VERSION"));
