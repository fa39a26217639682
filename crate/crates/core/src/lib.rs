//! Bayes factors, calibration tables and decision rules around the
//! Jeffreys-Lindley paradox.
//!
//! Every Bayes factor is carried on the natural-log scale as an
//! [`EvidenceRatio`] with an explicit [`Orientation`].

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decisions;
pub mod error;
pub mod gaussian;
pub mod numcore;
pub mod proportions;
pub mod repro;
pub mod student;

pub use error::{Error, Result};
pub use numcore::{Budget, EvidenceRatio, Orientation};
