//! Map systems, derivative cocycles, co-norms and exponent estimators.

pub mod cocycle;
pub mod estimate;
pub mod linear;
pub mod orbit;
pub mod power;
pub mod system;
pub mod zoo;

use thiserror::Error;

pub use cocycle::{BmCocycle, ShiftPoint, Word};
pub use estimate::{
    expansion_indicator_over_set, kingman_doubling_average, min_lyapunov_estimate,
    ExponentEstimate, Scheme,
};
pub use linear::{conorm, LinearMap, Mat2, ProductAccumulator};
pub use orbit::{orbit_string, OrbitString};
pub use power::PowerMap;
pub use system::{circle_diff, circle_distance, orbit_points, wrap01, Domain, MapSystem, Tolerances};
pub use zoo::{CircleZoo, Doubling, NeutralFixed, PerturbedDoubling, PlTent, ZooMap};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("singular derivative encountered")]
    SingularMatrix,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("point #{index} ({point}) is not periodic with period {period}: drift {drift:.3e}")]
    NotPeriodic {
        index: usize,
        point: String,
        period: usize,
        drift: f64,
    },
    #[error("orbit points are inconsistent at step {step}: drift {drift:.3e}")]
    InconsistentOrbit { step: usize, drift: f64 },
}
