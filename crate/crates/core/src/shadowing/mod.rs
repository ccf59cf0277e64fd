//! Closing and shadowing of quasi-expanding pseudo-orbits of circle maps.
//!
//! A pseudo-orbit `(y_j)` is shadowed by solving for chart displacements
//! `v_j` with `f(y_j + v_j) = y_{j+1} + v_{j+1}`. In the arc-length chart the
//! lift at `(y_j, y_{j+1})` is `Φ_j(v) = f(y_j + v) − y_{j+1}`, split as
//! `H_j v + φ_j(v)` with `H_j = f′(y_j)`. Blocks that are only
//! quasi-expanding are rescaled by a well-adapted string so that every
//! rescaled `H̃_j` expands by at least `1/γ`, and the resulting sequence-space
//! map is solved by backward sweeps of the inverse-graph transform.

mod chain;
mod close;
mod config;
mod lift;
mod solver;

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::strings::StringError;

pub use chain::PseudoOrbitChain;
pub use close::{close_periodic, close_periodic_with_guess, shadow_finite, ShadowResult};
pub use config::ShadowingConfig;
pub use lift::{build_lift, Lift};
pub use solver::{
    compose_and_rescale, solve_contraction, Boundary, ChartSequence, FixedPoint, RescaledChain,
};

/// Maps the shadowing machinery accepts: scalar circle maps.
pub trait CircleMap: crate::dynamics::MapSystem<Point = f64, Jacobian = f64> {}

impl<S: crate::dynamics::MapSystem<Point = f64, Jacobian = f64>> CircleMap for S {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShadowError {
    #[error("gap {gap:.3e} at link {index} exceeds the limit {limit:.3e}")]
    GapTooLarge { index: usize, gap: f64, limit: f64 },
    #[error("string {index} is not {lambda}-quasi-expanding")]
    NotQuasiExpanding { index: usize, lambda: f64 },
    #[error("contraction did not converge after {iterations} sweeps (last change {last_change:.3e})")]
    ContractionFailed { iterations: usize, last_change: f64 },
    #[error("solver precondition violated: {0}")]
    Precondition(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
    #[error("invalid shadowing configuration: {0}")]
    BadConfig(String),
    #[error("pseudo-orbit chain is empty")]
    EmptyChain,
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Strings(#[from] StringError),
}
