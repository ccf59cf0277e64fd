//! Real-number strings: γ-strings, quasi-expanding strings, Pliss sifting,
//! obstructions, gap classification and well-adapted rescaling strings.
//!
//! All comparisons `mean ≥ γ` are closed and use an absolute slack of
//! [`STRING_TOL`].

mod adapted;
mod real;
mod sift;

use thiserror::Error;

pub use adapted::{check_well_adapted, well_adapted, PositiveString, WellAdaptedViolation};
pub use real::{
    is_gamma_string, is_obstruction, is_quasi_expanding, is_quasi_expanding_values, RealString,
};
pub use sift::{
    classify_gaps, extract_bad_quasi_string, pliss_constants, pliss_sift, GapLabel, Hypothesis,
    LabeledGap, SiftResult,
};
pub(crate) use sift::sift_indices;

/// Slack for equality in string comparisons.
pub const STRING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StringError {
    #[error("string is empty")]
    Empty,
    #[error("entry {index} = {value} exceeds the bound H = {bound}")]
    OutOfBound { index: usize, value: f64, bound: f64 },
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("mean {mean} is below gamma = {gamma}")]
    NotGammaString { mean: f64, gamma: f64 },
    #[error("hypothesis ({0}) not met")]
    HypothesesNotMet(Hypothesis),
    #[error("string is not {gamma}-quasi-expanding (partial product fails at length {k})")]
    NotQuasiExpanding { gamma: f64, k: usize },
}
