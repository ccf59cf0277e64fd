//! End-to-end procedures: periodic-repeller search, abnormal-orbit checks
//! and uniform-expansion constant fitting.

mod abnormal;
mod expansion;
mod hausdorff;
mod repellers;

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::shadowing::ShadowError;
use crate::strings::StringError;

pub use abnormal::{
    scan_bm_cocycle, search_abnormal, verify_abnormal, verify_abnormal_orbit, AbnormalVerdict,
    BmScanRow, PeriodicOrbit,
};
pub use expansion::{estimate_expansion_constants, ExpansionFit};
pub use hausdorff::{directed_circle_distance, hausdorff_circle};
pub use repellers::{
    choose_power, find_repellers, find_repellers_planned, jittered_orbit, Grouping, RecurrencePair, Repeller,
    RepellerOptions, RepellerSearchReport,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("no hyperbolic times along the seed orbit")]
    NoHyperbolicTimes,
    #[error("no recurrence pair within delta among {candidates} sifted times (try a longer horizon)")]
    NoRecurrence { candidates: usize },
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Strings(#[from] StringError),
    #[error(transparent)]
    Shadow(#[from] ShadowError),
}
