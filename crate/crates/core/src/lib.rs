//! Continuous frames and frame multipliers on finite weighted measure spaces.

// `!(x > y)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod controlled;
pub mod error;
pub mod frame;
pub mod hilbert;
pub mod measure;
pub mod multiplier;
pub mod random;
pub mod report;
pub mod suite;
pub mod tf_frames;

pub use error::{Error, Result};
pub use frame::{FrameBounds, SampledFrame};
pub use hilbert::{Operator, SchattenSpectrum, Vector};
pub use measure::{MeasureSpace, Symbol};
