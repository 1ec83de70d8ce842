//! Integer invariants of immersions computed from their Gauss maps.

// `!(x > 0.0)` is used deliberately so that NaN fails the check too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Symmetric tensors read more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]
pub mod error;
pub mod expr;
pub mod forms;
pub mod geometry;
pub mod cli;
pub mod integrate;
pub mod polyhedral;
pub mod smooth;
mod linalg;

pub use error::{Error, Result};
