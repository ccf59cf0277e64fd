use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hausdorff::hausdorff_circle;
use super::PipelineError;
use crate::dynamics::{kingman_doubling_average, wrap01, MapSystem, OrbitString};
use crate::shadowing::{close_periodic, CircleMap, PseudoOrbitChain, ShadowResult, ShadowingConfig};
use crate::strings::{pliss_sift, sift_indices, RealString};

/// Relative size of the per-step perturbation of the seed orbit.
const SEED_JITTER: f64 = 1e-15;

/// How recurrence candidates are grouped before one is picked per group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    /// Periods in `[2^b, 2^{b+1})` share a group.
    DyadicBand,
    /// One group per period.
    ExactPeriod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepellerOptions {
    pub max_repellers: usize,
    pub tau_min: usize,
    pub tau_max: Option<usize>,
    /// Require `n′ ≤ lead_ratio · (n″ − n′)`.
    pub lead_ratio: Option<f64>,
    pub grouping: Grouping,
    pub candidates_per_group: usize,
    /// Seeds the perturbation of the seed orbit.
    pub seed: u64,
}

impl Default for RepellerOptions {
    fn default() -> Self {
        Self {
            max_repellers: 8,
            tau_min: 3,
            tau_max: None,
            lead_ratio: Some(0.5),
            grouping: Grouping::DyadicBand,
            candidates_per_group: 16,
            seed: 0,
        }
    }
}

/// Sifted times `n′ < n″` whose orbit points nearly coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrencePair {
    pub n_start: usize,
    pub n_end: usize,
    pub tau: usize,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Repeller {
    pub pair: RecurrencePair,
    pub shadow: ShadowResult,
    /// Mean log co-norm over one period.
    pub indicator: f64,
    /// Hausdorff distance from the periodic orbit to the seed orbit.
    pub hausdorff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepellerSearchReport {
    pub map: String,
    pub seed_point: f64,
    pub horizon: usize,
    /// `(γ, γ′, γ″)`.
    pub gammas: [f64; 3],
    pub sift_count: usize,
    pub pliss_c: f64,
    pub candidate_pairs: usize,
    pub pairs: Vec<RecurrencePair>,
    /// Sorted by period, then by point.
    pub repellers: Vec<Repeller>,
    pub hausdorff_trace: Vec<f64>,
}

/// Orbit of `x` where every step is multiplied by `1 + η`, `|η| ≤ 1e-15`.
///
/// In binary floating point the doubling map sheds one mantissa bit per step
/// and reaches 0 after about 53 steps; the relative perturbation keeps the
/// orbit generic while leaving exact zeros (fixed points at 0) in place.
pub fn jittered_orbit<S: CircleMap>(
    sys: &S,
    x: f64,
    horizon: usize,
    seed: u64,
) -> Result<OrbitString<f64>, PipelineError> {
    if horizon == 0 {
        return Err(PipelineError::BadParameters("horizon must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(horizon + 1);
    points.push(wrap01(x));
    for i in 0..horizon {
        let eta: f64 = rng.random_range(-SEED_JITTER..=SEED_JITTER);
        points.push(wrap01(sys.eval(&points[i]) * (1.0 + eta)));
    }
    Ok(OrbitString::from_points(sys, points, 1e-12)?)
}

/// First doubling level `t_ℓ = 2^ℓ t₁` whose Kingman average exceeds `gamma`.
pub fn choose_power<S: MapSystem>(
    sys: &S,
    x: &S::Point,
    gamma: f64,
    t1: usize,
    levels: usize,
    blocks: usize,
) -> Result<Option<usize>, PipelineError> {
    let est = kingman_doubling_average(sys, x, t1, levels, blocks)?;
    Ok(est.iter().find(|e| e.value > gamma).map(|e| e.horizon))
}

/// Searches for periodic repellers near a seed orbit.
///
/// Sifts the orbit's hyperbolic times at `(γ, γ′)`, pairs sifted times that
/// return within `δ`, and closes each chosen segment into a periodic orbit.
/// Within a group the 16 closest returns are ranked by how well their
/// segment covers the seed orbit (Hausdorff distance), and the best one that
/// closes is kept.
pub fn find_repellers<S: CircleMap>(
    sys: &S,
    x: f64,
    horizon: usize,
    gammas: (f64, f64, f64),
    cfg: &ShadowingConfig,
    opts: &RepellerOptions,
) -> Result<RepellerSearchReport, PipelineError> {
    check_gammas(gammas, cfg.lambda, cfg.epsilon)?;
    search(sys, x, horizon, gammas, || Ok(cfg.clone()), opts)
}

/// As [`find_repellers`], planning the shadowing constants from `(λ, ε)`
/// only once the sift has found hyperbolic times. Maps that cannot be
/// planned (e.g. with a neutral point) still report an empty sift.
pub fn find_repellers_planned<S: CircleMap>(
    sys: &S,
    x: f64,
    horizon: usize,
    gammas: (f64, f64, f64),
    lambda: f64,
    epsilon: f64,
    opts: &RepellerOptions,
) -> Result<RepellerSearchReport, PipelineError> {
    check_gammas(gammas, lambda, epsilon)?;
    search(
        sys,
        x,
        horizon,
        gammas,
        || Ok(ShadowingConfig::plan(sys, lambda, epsilon)?),
        opts,
    )
}

fn check_gammas(gammas: (f64, f64, f64), lambda: f64, epsilon: f64) -> Result<(), PipelineError> {
    let (g, gp, gpp) = gammas;
    if !(g > gp && gp > gpp && gpp > 0.0) {
        return Err(PipelineError::BadParameters(format!(
            "need gamma > gamma' > gamma'' > 0, got {gammas:?}"
        )));
    }
    if lambda > gp + 1e-12 {
        return Err(PipelineError::BadParameters(format!(
            "lambda = {lambda} must not exceed gamma' = {gp}"
        )));
    }
    if lambda - epsilon < gpp - 1e-12 {
        return Err(PipelineError::BadParameters(format!(
            "lambda - epsilon = {} must be at least gamma'' = {gpp}",
            lambda - epsilon
        )));
    }
    Ok(())
}

fn search<S: CircleMap>(
    sys: &S,
    x: f64,
    horizon: usize,
    gammas: (f64, f64, f64),
    plan: impl FnOnce() -> Result<ShadowingConfig, PipelineError>,
    opts: &RepellerOptions,
) -> Result<RepellerSearchReport, PipelineError> {
    let (g, gp, gpp) = gammas;
    let orbit = jittered_orbit(sys, x, horizon, opts.seed)?;
    let inc = orbit.increments();
    let sifted = sift_indices(inc, gp);
    if sifted.is_empty() {
        return Err(PipelineError::NoHyperbolicTimes);
    }
    let bound = inc.iter().fold(g, |m, a| m.max(a.abs()));
    let sift = pliss_sift(&RealString::new(inc.to_vec(), bound)?, g, gp)?;
    let pts = orbit.points();
    let cfg = &plan()?;

    let candidates = recurrence_candidates(pts, &sifted, cfg.delta, opts);
    if candidates.is_empty() {
        return Err(PipelineError::NoRecurrence {
            candidates: sifted.len(),
        });
    }
    let candidate_pairs = candidates.len();
    let mut groups: BTreeMap<usize, Vec<RecurrencePair>> = BTreeMap::new();
    for p in candidates {
        let key = match opts.grouping {
            Grouping::DyadicBand => p.tau.ilog2() as usize,
            Grouping::ExactPeriod => p.tau,
        };
        groups.entry(key).or_default().push(p);
    }
    let per_group = opts.candidates_per_group.max(1);
    let results: Vec<Option<Repeller>> = groups
        .into_par_iter()
        .map(|(_, mut group)| {
            group.sort_by(|a, b| a.gap.total_cmp(&b.gap).then(a.n_start.cmp(&b.n_start)));
            group.truncate(per_group);
            let mut ranked: Vec<(f64, RecurrencePair)> = group
                .into_iter()
                .map(|p| (hausdorff_circle(&pts[p.n_start..p.n_end], pts), p))
                .collect();
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.gap.total_cmp(&b.1.gap)));
            ranked.into_iter().find_map(|(_, pair)| {
                let segment = orbit.segment(pair.n_start, pair.tau).ok()?;
                let chain = PseudoOrbitChain::cyclic_single(sys, segment).ok()?;
                let shadow = close_periodic(sys, &chain, cfg).ok()?;
                let indicator = *shadow.post_averages.last()?;
                if indicator < gpp || shadow.suffix_min_average < gpp {
                    return None;
                }
                let hausdorff = hausdorff_circle(&shadow.orbit, pts);
                Some(Repeller {
                    pair,
                    shadow,
                    indicator,
                    hausdorff,
                })
            })
        })
        .collect();
    let mut repellers: Vec<Repeller> = results
        .into_iter()
        .flatten()
        .take(opts.max_repellers)
        .collect();
    repellers.sort_by(|a, b| {
        a.shadow
            .period
            .cmp(&b.shadow.period)
            .then(a.shadow.point.total_cmp(&b.shadow.point))
    });
    Ok(RepellerSearchReport {
        map: sys.name(),
        seed_point: x,
        horizon,
        gammas: [g, gp, gpp],
        sift_count: sift.indices.len(),
        pliss_c: sift.c,
        candidate_pairs,
        pairs: repellers.iter().map(|r| r.pair).collect(),
        hausdorff_trace: repellers.iter().map(|r| r.hausdorff).collect(),
        repellers,
    })
}

/// All sifted pairs `n′ < n″` with `d(x_{n′}, x_{n″}) < δ` passing the
/// period and lead filters.
fn recurrence_candidates(
    pts: &[f64],
    sifted: &[usize],
    delta: f64,
    opts: &RepellerOptions,
) -> Vec<RecurrencePair> {
    let mut by_pos: Vec<(f64, usize)> = sifted.iter().map(|&n| (pts[n], n)).collect();
    by_pos.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let len = by_pos.len();
    let mut out = Vec::new();
    for i in 0..len {
        // walk forward around the circle while within delta
        for step in 1..len {
            let (pj, nj) = by_pos[(i + step) % len];
            let raw = pj - by_pos[i].0;
            let dist = if raw < 0.0 { raw + 1.0 } else { raw };
            if dist >= delta {
                break;
            }
            let (a, b) = if by_pos[i].1 < nj { (by_pos[i].1, nj) } else { (nj, by_pos[i].1) };
            let tau = b - a;
            if tau < opts.tau_min.max(1) || opts.tau_max.is_some_and(|m| tau > m) {
                continue;
            }
            if opts.lead_ratio.is_some_and(|r| a as f64 > r * tau as f64) {
                continue;
            }
            out.push(RecurrencePair {
                n_start: a,
                n_end: b,
                tau,
                gap: crate::dynamics::circle_distance(pts[a], pts[b]),
            });
        }
    }
    out.sort_by_key(|x| (x.n_start, x.n_end));
    out.dedup_by(|x, y| x.n_start == y.n_start && x.n_end == y.n_end);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Doubling, NeutralFixed};

    #[test]
    fn jitter_keeps_doubling_orbit_alive() {
        let o = jittered_orbit(&Doubling, 0.1234, 500, 1).unwrap();
        assert!(o.points()[400..].iter().any(|&p| p != 0.0));
        let plain: Vec<f64> = crate::dynamics::orbit_points(&Doubling, &0.1234, 80);
        assert_eq!(plain[80], 0.0);
    }

    #[test]
    fn jitter_keeps_exact_zero() {
        let m = NeutralFixed::new(0.5).unwrap();
        let o = jittered_orbit(&m, 0.0, 50, 3).unwrap();
        assert!(o.points().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn neutral_seed_has_no_hyperbolic_times() {
        let m = NeutralFixed::new(0.5).unwrap();
        let r = find_repellers_planned(&m, 0.0, 1000, (0.6, 0.5, 0.4), 0.5, 0.05, &RepellerOptions::default());
        assert_eq!(r.unwrap_err(), PipelineError::NoHyperbolicTimes);
    }

    #[test]
    fn candidates_respect_filters() {
        let o = jittered_orbit(&Doubling, std::f64::consts::FRAC_1_PI, 2000, 7).unwrap();
        let sifted: Vec<usize> = (1..=2000).collect();
        let opts = RepellerOptions::default();
        let c = recurrence_candidates(o.points(), &sifted, 0.01, &opts);
        assert!(!c.is_empty());
        for p in &c {
            assert!(p.gap < 0.01 && p.tau >= 3 && p.n_start as f64 <= 0.5 * p.tau as f64);
        }
    }

    #[test]
    fn power_choice_for_doubling_is_one() {
        assert_eq!(choose_power(&Doubling, &0.3, 0.6, 1, 4, 8).unwrap(), Some(1));
        assert_eq!(choose_power(&Doubling, &0.3, 0.7, 1, 4, 8).unwrap(), None);
    }
}
