//! Gaussian-limit correlations in the Lipkin–Meshkov–Glick model.
//!
//! The pipeline is `ModelPoint` → covariance matrix → standard form →
//! correlation measures, plus an exact finite-N ground-state oracle.

// `!(x > 0.0)` is how inputs reject NaN; 4×4 matrices read best indexed.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

mod error;
mod numeric;
mod par;

pub mod criticality;
pub mod gaussian;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod sweep;

pub use error::{Error, Result};
pub use gaussian::{covariance, standard_form, StandardForm, TwoModeCovariance};
pub use measures::{evaluate, CorrelationReport, EminBranch, Measure, Units};
pub use par::is_parallel;
pub use model::{Couplings, ModelPoint, Partition, PartitionKind, Phase};
