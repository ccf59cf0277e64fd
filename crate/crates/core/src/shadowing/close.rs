use serde::{Deserialize, Serialize};

use super::chain::PseudoOrbitChain;
use super::solver::{compose_and_rescale, solve_contraction, Boundary, FixedPoint};
use super::{CircleMap, ShadowError, ShadowingConfig};
use crate::dynamics::LinearMap;

/// A true orbit shadowing a pseudo-orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowResult {
    /// `Σ n_i` for a closed cycle, `None` for finite shadowing.
    pub period: Option<usize>,
    /// The shadowing point `z`.
    pub point: f64,
    /// `max_j d(f^j(z), y_j)`.
    pub shadow_distance: f64,
    /// Smallest suffix average of log co-norm along the orbit.
    pub suffix_min_average: f64,
    pub config_echo: ShadowingConfig,
    /// `z, f(z), …` over one period (or the finite window).
    #[serde(skip)]
    pub orbit: Vec<f64>,
    /// `(1/ℓ) Σ_{j=1..ℓ} log ‖D_{f^{T−j}(z)} f‖_co` for `ℓ = 1…T`.
    #[serde(skip)]
    pub post_averages: Vec<f64>,
    /// Solver residual in rescaled charts.
    #[serde(skip)]
    pub residual: f64,
    #[serde(skip)]
    pub sweeps: usize,
}

/// Closes a cyclic quasi-expanding pseudo-orbit to a periodic orbit.
///
/// On success the orbit has period `Σ n_i` (each step checked to `tol_per`),
/// stays within `ε` of the pseudo-orbit, and every suffix average of log
/// co-norm over the period is at least `λ − ε`.
pub fn close_periodic<S: CircleMap>(
    sys: &S,
    chain: &PseudoOrbitChain,
    cfg: &ShadowingConfig,
) -> Result<ShadowResult, ShadowError> {
    close_periodic_with_guess(sys, chain, cfg, None)
}

/// [`close_periodic`] started from a given rescaled initial guess.
pub fn close_periodic_with_guess<S: CircleMap>(
    sys: &S,
    chain: &PseudoOrbitChain,
    cfg: &ShadowingConfig,
    initial: Option<&[f64]>,
) -> Result<ShadowResult, ShadowError> {
    if !chain.is_cyclic() {
        return Err(ShadowError::BadConfig("closing needs a cyclic chain".into()));
    }
    let rescaled = compose_and_rescale(sys, chain, cfg)?;
    let fp = solve_contraction(&rescaled, cfg, Boundary::Cyclic, initial)?;
    let v = rescaled.unscale(&fp.v);
    let orbit = rescaled.points(&v);
    let t = orbit.len();
    for j in 0..t {
        let drift = sys.distance(&sys.eval(&orbit[j]), &orbit[(j + 1) % t]);
        if !(drift <= cfg.tol.per) {
            return Err(ShadowError::Postcondition(format!(
                "closed orbit breaks at step {j}: drift {drift:.3e}"
            )));
        }
    }
    finish(sys, cfg, Some(t), orbit, &v, &fp, true)
}

/// Shadows an open chain over its finite window, pinning the last point.
pub fn shadow_finite<S: CircleMap>(
    sys: &S,
    chain: &PseudoOrbitChain,
    cfg: &ShadowingConfig,
) -> Result<ShadowResult, ShadowError> {
    if chain.is_cyclic() {
        return Err(ShadowError::BadConfig("finite shadowing needs an open chain".into()));
    }
    let rescaled = compose_and_rescale(sys, chain, cfg)?;
    let fp = solve_contraction(&rescaled, cfg, Boundary::Terminal(0.0), None)?;
    let v = rescaled.unscale(&fp.v);
    let orbit = rescaled.points(&v);
    finish(sys, cfg, None, orbit, &v, &fp, false)
}

fn finish<S: CircleMap>(
    sys: &S,
    cfg: &ShadowingConfig,
    period: Option<usize>,
    orbit: Vec<f64>,
    v: &[f64],
    fp: &FixedPoint,
    require_suffixes: bool,
) -> Result<ShadowResult, ShadowError> {
    let shadow_distance = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if !(shadow_distance <= cfg.epsilon) {
        return Err(ShadowError::Postcondition(format!(
            "shadow distance {shadow_distance:.3e} exceeds epsilon = {}",
            cfg.epsilon
        )));
    }
    let post_averages = suffix_averages(sys, &orbit)?;
    let suffix_min_average = post_averages.iter().copied().fold(f64::INFINITY, f64::min);
    if require_suffixes && suffix_min_average < cfg.lambda - cfg.epsilon {
        return Err(ShadowError::Postcondition(format!(
            "suffix average {suffix_min_average} is below lambda - epsilon = {}",
            cfg.lambda - cfg.epsilon
        )));
    }
    Ok(ShadowResult {
        period,
        point: orbit[0],
        shadow_distance,
        suffix_min_average,
        config_echo: cfg.clone(),
        orbit,
        post_averages,
        residual: fp.residual,
        sweeps: fp.sweeps,
    })
}

fn suffix_averages<S: CircleMap>(sys: &S, orbit: &[f64]) -> Result<Vec<f64>, ShadowError> {
    let mut sum = 0.0;
    let mut out = Vec::with_capacity(orbit.len());
    for (l, z) in orbit.iter().rev().enumerate() {
        sum += sys.deriv(z).conorm()?.ln();
        out.push(sum / (l + 1) as f64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{circle_distance, orbit_string, Doubling, MapSystem, OrbitString};

    fn nearest_periodic(x: f64, n: u32) -> f64 {
        let q = (1u64 << n) as f64 - 1.0;
        let k = (x * q).round();
        circle_distance(x, k / q)
    }

    #[test]
    fn exact_orbit_is_returned_unchanged() {
        let cfg = ShadowingConfig::plan(&Doubling, 0.5, 0.01).unwrap();
        let s = orbit_string(&Doubling, &(1.0 / 3.0), 2).unwrap();
        let chain = PseudoOrbitChain::cyclic_single(&Doubling, s).unwrap();
        let r = close_periodic(&Doubling, &chain, &cfg).unwrap();
        assert_eq!(r.period, Some(2));
        assert!(r.shadow_distance < 1e-15);
        assert!(nearest_periodic(r.point, 2) < 1e-15);
    }

    #[test]
    fn one_seventh_pseudo_cycle_closes() {
        let cfg = ShadowingConfig::plan(&Doubling, 0.6, 0.2).unwrap();
        assert!(cfg.delta > 0.007);
        let s = orbit_string(&Doubling, &(1.0 / 7.0 + 0.001), 3).unwrap();
        let chain = PseudoOrbitChain::cyclic_single(&Doubling, s).unwrap();
        let r = close_periodic(&Doubling, &chain, &cfg).unwrap();
        assert_eq!(r.period, Some(3));
        assert!(circle_distance(r.point, 1.0 / 7.0) < 1e-10);
        for a in &r.post_averages {
            assert!((a - std::f64::consts::LN_2).abs() < 1e-12);
        }
    }

    #[test]
    fn two_glued_strings_give_period_five() {
        // 9/31 → 18/31 → 5/31 → 10/31 → 20/31 split into strings of length 2 and 3
        let cfg = ShadowingConfig::plan(&Doubling, 0.5, 0.05).unwrap();
        let d = cfg.delta / 20.0;
        let a = orbit_string(&Doubling, &(9.0 / 31.0 + d), 2).unwrap();
        let b = orbit_string(&Doubling, &(5.0 / 31.0 - d), 3).unwrap();
        let chain = PseudoOrbitChain::new(&Doubling, vec![a, b], true).unwrap();
        assert!(chain.max_gap() < cfg.delta);
        let r = close_periodic(&Doubling, &chain, &cfg).unwrap();
        assert_eq!(r.period, Some(5));
        assert!(circle_distance(r.point, 9.0 / 31.0) < 1e-10);
        assert!(r.shadow_distance <= cfg.epsilon);
    }

    #[test]
    fn large_gap_is_rejected() {
        let cfg = ShadowingConfig::plan(&Doubling, 0.5, 0.01).unwrap();
        let s = orbit_string(&Doubling, &0.3, 4).unwrap();
        let chain = PseudoOrbitChain::cyclic_single(&Doubling, s).unwrap();
        assert!(matches!(
            close_periodic(&Doubling, &chain, &cfg),
            Err(ShadowError::GapTooLarge { .. })
        ));
    }

    #[test]
    fn finite_window_shadows_open_chain() {
        let cfg = ShadowingConfig::plan(&Doubling, 0.5, 0.05).unwrap();
        let pts: Vec<f64> = vec![0.1, 0.2 + 1e-4, 0.4 + 1e-4, 0.8 + 3e-4];
        let strings = pts
            .windows(2)
            .map(|w| OrbitString::from_points(&Doubling, vec![w[0], 2.0 * w[0] % 1.0], 0.0).unwrap())
            .collect();
        let chain = PseudoOrbitChain::new(&Doubling, strings, false).unwrap();
        let r = shadow_finite(&Doubling, &chain, &cfg).unwrap();
        assert_eq!(r.period, None);
        for w in r.orbit.windows(2) {
            assert!(circle_distance(Doubling.eval(&w[0]), w[1]) < 1e-12);
        }
    }
}
