//! Configuration-driven experiment runner behind the `siftshadow` binary.
//!
//! A run is described by a [`RunConfig`]: a command plus flat parameters,
//! read from a `key = value` file and overridden by command-line flags.
//! Results are written as canonical JSON (sorted keys, every float printed
//! with 17 significant digits) so that reruns with the same configuration
//! and seed are byte-identical, or as CSV.

mod canonical;
mod compare;
mod config;
mod run;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::pipeline::PipelineError;
use crate::shadowing::ShadowError;
use crate::strings::StringError;

pub use canonical::{canonical_json, to_canonical_json};
pub use compare::{compare_files, compare_values, CompareTolerances, Diff};
pub use config::{parse_config_file, parse_config_str};
pub use run::{
    configure_threads, read_report, run, ExpansionOutput, KingmanOutput, Report, RunOutput, ShadowOutput,
    SiftOutput, VerifyOutput, LIBRARY_VERSION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Sift,
    Shadow,
    Close,
    Repellers,
    VerifyAbnormal,
    ExpansionFit,
    Kingman,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Sift => "sift",
            Command::Shadow => "shadow",
            Command::Close => "close",
            Command::Repellers => "repellers",
            Command::VerifyAbnormal => "verify-abnormal",
            Command::ExpansionFit => "expansion-fit",
            Command::Kingman => "kingman",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| RunError::Config(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Where `expansion-fit` takes its sample points from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleSource {
    /// Base-2 Halton points `0, 1/2, 1/4, 3/4, …` (the first is `0`).
    #[default]
    Halton,
    /// Orbit points of the repellers found from the seed.
    Repellers,
    /// The seed orbit itself.
    Orbit,
}

/// Flat run parameters. Every field is optional; each command fills in the
/// defaults it needs and rejects invalid combinations.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Zoo name such as `doubling` or `pl_tent(3,1.5)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    /// `κ` for working with `f^κ`, or `auto`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<String>,
    /// Seed point on the circle.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    /// Periodic driving word for the cocycle, e.g. `0110`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    /// Explicit real string for `sift`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Bound `H` on the explicit string.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_double_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Uniform perturbation of block base points for `shadow`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    /// First orbit index used by `shadow` and `close`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    /// Period (`close`, `verify-abnormal`) or block length (`shadow`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_repellers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Not echoed: reruns to different files must produce the same bytes.
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub format: Option<Format>,
}

impl Params {
    /// Field-wise `self` over `fallback`.
    pub fn or(self, fallback: Params) -> Params {
        macro_rules! pick {
            ($($f:ident),*) => {
                Params { $($f: self.$f.or(fallback.$f)),* }
            };
        }
        pick!(
            map, power, x, word, values, h, gamma, gamma_prime, gamma_double_prime, lambda,
            epsilon, noise, horizon, start, tau, tau_min, max_repellers, t1, levels, blocks,
            k_max, samples, sample, seed, output, format
        )
    }
}

/// A validated run: the command and its parameters with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("config line {line}, key `{key}`: {msg}")]
    ConfigLine { line: usize, key: String, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("report schema mismatch: {0}")]
    Schema(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("solver failed: {0}")]
    Solver(String),
}

impl RunError {
    /// 2 for validation and schema problems, 3 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Solver(_) => 3,
            _ => 2,
        }
    }
}

impl From<PipelineError> for RunError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::BadParameters(m) => RunError::Config(m),
            other => RunError::Solver(other.to_string()),
        }
    }
}

impl From<ShadowError> for RunError {
    fn from(e: ShadowError) -> Self {
        match e {
            ShadowError::BadConfig(m) => RunError::Config(m),
            other => RunError::Solver(other.to_string()),
        }
    }
}

impl From<DynamicsError> for RunError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::BadParameter(_) | DynamicsError::UnknownMap(_) => {
                RunError::Config(e.to_string())
            }
            other => RunError::Solver(other.to_string()),
        }
    }
}

impl From<StringError> for RunError {
    /// Explicit strings are user input, so their errors are validation errors.
    fn from(e: StringError) -> Self {
        RunError::Config(e.to_string())
    }
}
