//! Finite-depth truncations of the natural extension (inverse limit) of a
//! noninvertible map, its metric, and the `(t, γ)`-set check.

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dynamics::{DynamicsError, LinearMap, MapSystem};
use crate::strings::STRING_TOL;

/// Largest number of branches [`enumerate_branches`] will build.
pub const BRANCH_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtensionError {
    #[error("{count} branches exceed the cap of {cap}")]
    DepthTooLarge { count: f64, cap: usize },
    #[error("branch {index} has depth {depth}, need at least {needed}")]
    DepthTooSmall { index: usize, depth: usize, needed: usize },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// `(x₀, x₋₁, …, x₋d)` with `f(x₋ᵢ₋₁) = x₋ᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BackwardBranch<P> {
    present: P,
    history: Vec<P>,
}

impl<P: Clone> BackwardBranch<P> {
    pub fn new(present: P, history: Vec<P>) -> Self {
        Self { present, history }
    }

    /// The projection `π`.
    pub fn present(&self) -> &P {
        &self.present
    }

    /// `x₋₁, …, x₋d`.
    pub fn history(&self) -> &[P] {
        &self.history
    }

    pub fn depth(&self) -> usize {
        self.history.len()
    }

    /// `x₋ᵢ` for `i ∈ 0..=depth`.
    pub fn at(&self, i: usize) -> &P {
        if i == 0 {
            &self.present
        } else {
            &self.history[i - 1]
        }
    }

    /// Largest `d(f(x₋ᵢ₋₁), x₋ᵢ)` along the history.
    pub fn consistency_error<S: MapSystem<Point = P>>(&self, sys: &S) -> f64 {
        (0..self.depth())
            .map(|i| sys.distance(&sys.eval(self.at(i + 1)), self.at(i)))
            .fold(0.0, f64::max)
    }
}

impl<P: Serialize> Serialize for BackwardBranch<P> {
    fn serialize<Z: Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        s.collect_seq(std::iter::once(&self.present).chain(&self.history))
    }
}

/// All `q^depth` backward branches of `x` for a degree-`q` map.
pub fn enumerate_branches<S: MapSystem>(
    sys: &S,
    x: &S::Point,
    depth: usize,
) -> Result<Vec<BackwardBranch<S::Point>>, ExtensionError> {
    let count = (sys.degree() as f64).powi(depth as i32);
    if count > BRANCH_CAP as f64 {
        return Err(ExtensionError::DepthTooLarge {
            count,
            cap: BRANCH_CAP,
        });
    }
    let mut level = vec![BackwardBranch::new(x.clone(), Vec::new())];
    for _ in 0..depth {
        level = level
            .into_par_iter()
            .flat_map_iter(|b| {
                let tip = b.at(b.depth()).clone();
                sys.inverse_branches(&tip).into_iter().map(move |p| {
                    let mut history = b.history.clone();
                    history.push(p);
                    BackwardBranch::new(b.present.clone(), history)
                })
            })
            .collect();
    }
    Ok(level)
}

/// A truncated metric value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionDistance {
    pub value: f64,
    /// Number of history entries compared.
    pub depth: usize,
    /// `2^{−depth}`, a bound on the omitted tail.
    pub truncation_bound: f64,
}

/// `d_f(a, b) = Σ_{i≥0} 2^{−i} min(1, d(a₋ᵢ, b₋ᵢ))`, truncated at the
/// smaller depth.
pub fn extension_metric<S: MapSystem>(
    sys: &S,
    a: &BackwardBranch<S::Point>,
    b: &BackwardBranch<S::Point>,
) -> ExtensionDistance {
    let depth = a.depth().min(b.depth());
    let value = (0..=depth)
        .map(|i| 0.5f64.powi(i as i32) * sys.distance(a.at(i), b.at(i)).min(1.0))
        .sum();
    ExtensionDistance {
        value,
        depth,
        truncation_bound: 0.5f64.powi(depth as i32),
    }
}

/// Outcome of the `(t, γ)` check for one branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TGammaVerdict {
    pub branch: usize,
    /// The smallest phase `m ∈ [0, t)` whose windows all pass.
    pub witness: Option<usize>,
    /// Every failing `(m, r)` when there is no witness.
    pub failures: Vec<(usize, usize)>,
    /// Windows were checked for `r ≤ r_max` only.
    pub r_max: usize,
}

impl TGammaVerdict {
    pub fn passed(&self) -> bool {
        self.witness.is_some()
    }
}

/// For each branch, looks for `m ∈ [0, t)` such that every window of length
/// `r ≤ r_max` ending just before time `m` has mean log co-norm `≥ γ`.
///
/// Time `0` is the present; negative times come from the history and
/// positive times from forward iteration. A pass certifies the windows up to
/// `r_max` only.
pub fn check_t_gamma_set<S: MapSystem>(
    sys: &S,
    branches: &[BackwardBranch<S::Point>],
    t: usize,
    gamma: f64,
    r_max: usize,
) -> Result<Vec<TGammaVerdict>, ExtensionError> {
    let needed = t + r_max;
    if let Some((index, b)) = branches.iter().enumerate().find(|(_, b)| b.depth() < needed) {
        return Err(ExtensionError::DepthTooSmall {
            index,
            depth: b.depth(),
            needed,
        });
    }
    branches
        .iter()
        .enumerate()
        .map(|(branch, b)| {
            // increments at times −r_max … t−2, indexed from time −r_max
            let mut incs = Vec::with_capacity(r_max + t);
            for i in (1..=r_max).rev() {
                incs.push(sys.deriv(b.at(i)).conorm()?.ln());
            }
            let mut y = b.present().clone();
            for _ in 0..t.saturating_sub(1) {
                incs.push(sys.deriv(&y).conorm()?.ln());
                y = sys.eval(&y);
            }
            let mut failures = Vec::new();
            let mut witness = None;
            for m in 0..t {
                let end = r_max + m;
                let mut sum = 0.0;
                let mut ok = true;
                for r in 1..=r_max {
                    sum += incs[end - r];
                    if sum / (r as f64) < gamma - STRING_TOL {
                        failures.push((m, r));
                        ok = false;
                    }
                }
                if ok {
                    witness = Some(m);
                    failures.clear();
                    break;
                }
            }
            Ok(TGammaVerdict {
                branch,
                witness,
                failures,
                r_max,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Doubling, NeutralFixed, PerturbedDoubling};

    #[test]
    fn doubling_depth_two_from_zero() {
        let bs = enumerate_branches(&Doubling, &0.0, 2).unwrap();
        assert_eq!(bs.len(), 4);
        let firsts: Vec<f64> = bs.iter().map(|b| b.history()[0]).collect();
        assert_eq!(firsts, vec![0.0, 0.0, 0.5, 0.5]);
        let seconds: Vec<f64> = bs.iter().map(|b| b.history()[1]).collect();
        assert_eq!(seconds, vec![0.0, 0.5, 0.25, 0.75]);
    }

    #[test]
    fn depth_zero_is_the_point() {
        let bs = enumerate_branches(&Doubling, &0.3, 0).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].depth(), 0);
    }

    #[test]
    fn perturbed_branches_are_consistent() {
        let m = PerturbedDoubling::new(0.05).unwrap();
        let bs = enumerate_branches(&m, &0.3, 3).unwrap();
        assert_eq!(bs.len(), 8);
        for b in &bs {
            assert!(b.consistency_error(&m) <= 3e-10);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_branches(&Doubling, &0.3, 21),
            Err(ExtensionError::DepthTooLarge { .. })
        ));
    }

    #[test]
    fn metric_single_term() {
        let a = BackwardBranch::new(0.2, vec![0.1, 0.3]);
        let b = BackwardBranch::new(0.2, vec![0.6, 0.3]);
        let d = extension_metric(&Doubling, &a, &b);
        assert!((d.value - 0.25).abs() < 1e-15);
        assert_eq!(d.depth, 2);
        assert_eq!(d.truncation_bound, 0.25);
        assert_eq!(extension_metric(&Doubling, &a, &a).value, 0.0);
    }

    #[test]
    fn branches_serialize_present_first() {
        let a = BackwardBranch::new(0.5, vec![0.25, 0.125]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[0.5,0.25,0.125]");
    }

    #[test]
    fn doubling_branches_form_t_gamma_set() {
        let bs = enumerate_branches(&Doubling, &0.3, 5).unwrap();
        let v = check_t_gamma_set(&Doubling, &bs, 1, 0.69, 4).unwrap();
        assert!(v.iter().all(|x| x.witness == Some(0)));
    }

    #[test]
    fn neutral_point_fails() {
        let m = NeutralFixed::new(0.5).unwrap();
        let b = BackwardBranch::new(0.0, vec![0.0; 6]);
        let v = check_t_gamma_set(&m, &[b], 2, 0.01, 4).unwrap();
        assert!(!v[0].passed());
        assert_eq!(v[0].failures.len(), 8);
    }

    #[test]
    fn shallow_branch_is_rejected() {
        let b = BackwardBranch::new(0.3, vec![0.15]);
        assert!(matches!(
            check_t_gamma_set(&Doubling, &[b], 1, 0.1, 3),
            Err(ExtensionError::DepthTooSmall { .. })
        ));
    }
}
