//! BG-curvature forms, distortion tensors and first-eigenvalue lower bounds.

mod asn;
mod bgform;
pub(crate) mod distortion;
mod mconst;
mod optimize;
mod psd;
mod report;
mod theorems;

use thiserror::Error;

pub use asn::{sphere_points, ProductTerm};
pub use bgform::{asn_form, bg_form, bg_pencil, BgForm, BgPencil, SeminormConvention};
pub use distortion::{distortion, DistortionPack};
pub use mconst::{m_constant, m_constant_numeric, MConstant};
pub use optimize::{bound_asn, bound_main, bound_sntf, bound_t1zero, discrepancy, optimize, SweepOptions};
pub use psd::{feasible_rho1, SchurPencil, PSD_TOL};
pub use report::{
    AltConvention, BoundEntry, BoundReport, DiscrepancyRecord, Skipped, Theorem, CSV_COLUMNS,
};
pub use theorems::{
    asn_value, bound_pseudohermitian, delta, main_value, sntf_value, t1zero_value, DimensionRatio,
    PseudohermitianBound,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("x must lie in [0, 1), got {0}")]
    XOutOfRange(f64),
    #[error("rho2 must be positive and finite, got {0}")]
    BadRho2(f64),
    #[error("{name} must be nonnegative and finite, got {value}")]
    NegativeInput { name: &'static str, value: f64 },
    #[error("{theorem} bound does not apply: {reason}")]
    Inapplicable { theorem: Theorem, reason: String },
    #[error("invalid pseudohermitian data: {0}")]
    Pseudohermitian(&'static str),
    #[error("serialization failed: {0}")]
    Serialize(String),
}
