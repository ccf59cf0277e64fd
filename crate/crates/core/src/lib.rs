//! Hyperbolic times, shadowing, and periodic repellers for expanding-on-average
//! circle maps and linear cocycles over shifts.
//!
//! The layers build on each other:
//!
//! - [`dynamics`]: the map zoo, co-norms, overflow-safe products and
//!   Lyapunov estimators.
//! - [`strings`]: real strings, the Pliss sift and well-adapted strings.
//! - [`shadowing`]: closing and shadowing pseudo-orbit chains by a
//!   contraction in rescaled charts.
//! - [`extension`]: backward branches and the natural-extension metric.
//! - [`pipeline`]: repeller search, abnormal points and expansion fits.
//! - [`experiments`]: the deterministic runner behind the `siftshadow` binary.

// `!(x <= bound)` is used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod sampling;
pub mod shadowing;
pub mod strings;
pub mod experiments;
pub mod extension;
pub mod pipeline;
