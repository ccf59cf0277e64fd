use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::dynamics::{
    min_lyapunov_estimate, BmCocycle, DynamicsError, LinearMap, MapSystem, Mat2, ShiftPoint, Word,
};
use crate::shadowing::CircleMap;

/// Outcome of the abnormal-inequality check on one periodic orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbnormalVerdict {
    /// Period mean of log co-norm is below `γ″`.
    pub mean_below: bool,
    /// Every suffix average of log co-norm exceeds `γ′`.
    pub suffixes_above: bool,
    pub mean: f64,
    pub min_suffix: f64,
}

impl AbnormalVerdict {
    pub fn is_abnormal(&self) -> bool {
        self.mean_below && self.suffixes_above
    }
}

/// A checked periodic orbit `p, f(p), …, f^{τ−1}(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit<P> {
    points: Vec<P>,
}

impl<P: Clone + std::fmt::Debug> PeriodicOrbit<P> {
    /// Checks `d(f(p_i), p_{i+1 mod τ}) ≤ tol` step by step.
    pub fn from_cycle<S: MapSystem<Point = P>>(
        sys: &S,
        points: Vec<P>,
        tol: f64,
    ) -> Result<Self, DynamicsError> {
        if points.is_empty() {
            return Err(DynamicsError::BadParameter("empty cycle".into()));
        }
        let n = points.len();
        for (index, p) in points.iter().enumerate() {
            let drift = sys.distance(&sys.eval(p), &points[(index + 1) % n]);
            if !(drift <= tol) {
                return Err(DynamicsError::NotPeriodic {
                    index,
                    point: format!("{p:?}"),
                    period: n,
                    drift,
                });
            }
        }
        Ok(Self { points })
    }

    /// Iterates `p` forward `τ` times and checks the return.
    pub fn from_point<S: MapSystem<Point = P>>(
        sys: &S,
        p: &P,
        tau: usize,
        tol: f64,
    ) -> Result<Self, DynamicsError> {
        if tau == 0 {
            return Err(DynamicsError::BadParameter("period must be at least 1".into()));
        }
        let mut points = Vec::with_capacity(tau);
        let mut y = p.clone();
        for _ in 0..tau {
            points.push(y.clone());
            y = sys.eval(&y);
        }
        let drift = sys.distance(&y, p);
        if !(drift <= tol) {
            return Err(DynamicsError::NotPeriodic {
                index: 0,
                point: format!("{p:?}"),
                period: tau,
                drift,
            });
        }
        Ok(Self { points })
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }
}

/// Checks the abnormal inequalities at a periodic point `p` of period `tau`.
///
/// Requires `0 < γ′ < γ″`. The two verdicts are computed independently.
pub fn verify_abnormal<S: MapSystem>(
    sys: &S,
    p: &S::Point,
    tau: usize,
    gamma_prime: f64,
    gamma_double_prime: f64,
    tol_per: f64,
) -> Result<AbnormalVerdict, PipelineError> {
    let orbit = PeriodicOrbit::from_point(sys, p, tau, tol_per)?;
    verify_abnormal_orbit(sys, &orbit, gamma_prime, gamma_double_prime)
}

pub fn verify_abnormal_orbit<S: MapSystem>(
    sys: &S,
    orbit: &PeriodicOrbit<S::Point>,
    gamma_prime: f64,
    gamma_double_prime: f64,
) -> Result<AbnormalVerdict, PipelineError> {
    if !(0.0 < gamma_prime && gamma_prime < gamma_double_prime) {
        return Err(PipelineError::BadParameters(format!(
            "need 0 < gamma' < gamma'', got ({gamma_prime}, {gamma_double_prime})"
        )));
    }
    let inc = orbit
        .points()
        .iter()
        .map(|x| sys.deriv(x).conorm().map(f64::ln))
        .collect::<Result<Vec<_>, _>>()?;
    let tau = inc.len();
    let mut tail = 0.0;
    let mut min_suffix = f64::INFINITY;
    for (k, a) in inc.iter().enumerate().rev() {
        tail += a;
        min_suffix = min_suffix.min(tail / (tau - k) as f64);
    }
    let mean = tail / tau as f64;
    Ok(AbnormalVerdict {
        mean_below: mean < gamma_double_prime,
        suffixes_above: min_suffix > gamma_prime,
        mean,
        min_suffix,
    })
}

/// Random-restart search for abnormal periodic orbits of a circle map.
///
/// Each trial draws a branch itinerary of length in `periods` and pulls a
/// point back through the matching inverse branches until it settles on
/// the periodic orbit with that itinerary. Orbits that pass the periodicity
/// check and both abnormal inequalities are returned, deduplicated and
/// sorted by period then smallest point. Finding none proves nothing.
pub fn search_abnormal<S: CircleMap>(
    sys: &S,
    periods: std::ops::RangeInclusive<usize>,
    trials: usize,
    gamma_prime: f64,
    gamma_double_prime: f64,
    seed: u64,
) -> Result<Vec<(PeriodicOrbit<f64>, AbnormalVerdict)>, PipelineError> {
    const PULLBACK_ROUNDS: usize = 400;
    const TOL: f64 = 1e-9;
    if periods.is_empty() || *periods.start() == 0 {
        return Err(PipelineError::BadParameters("periods must be a nonempty range of positive integers".into()));
    }
    let degree = sys.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<(PeriodicOrbit<f64>, AbnormalVerdict)> = Vec::new();
    for _ in 0..trials {
        let tau = rng.random_range(periods.clone());
        let word: Vec<usize> = (0..tau).map(|_| rng.random_range(0..degree)).collect();
        let mut z: f64 = rng.random();
        for _ in 0..PULLBACK_ROUNDS {
            for &b in word.iter().rev() {
                z = sys.inverse_branches(&z)[b];
            }
        }
        let Ok(orbit) = PeriodicOrbit::from_point(sys, &z, tau, TOL) else {
            continue;
        };
        let verdict = verify_abnormal_orbit(sys, &orbit, gamma_prime, gamma_double_prime)?;
        if !verdict.is_abnormal() {
            continue;
        }
        let lowest = min_point(&orbit);
        let duplicate = found.iter().any(|(o, _)| {
            o.period() == tau && crate::dynamics::circle_distance(min_point(o), lowest) < 1e-7
        });
        if !duplicate {
            found.push((orbit, verdict));
        }
    }
    found.sort_by(|a, b| {
        a.0.period()
            .cmp(&b.0.period())
            .then(min_point(&a.0).total_cmp(&min_point(&b.0)))
    });
    Ok(found)
}

fn min_point(o: &PeriodicOrbit<f64>) -> f64 {
    o.points().iter().copied().fold(f64::INFINITY, f64::min)
}

/// One `(α, γ)` cell of a cocycle scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BmScanRow {
    pub alpha: f64,
    pub gamma: f64,
    /// Smallest minimal Lyapunov exponent among periodic words up to the
    /// period cap.
    pub min_periodic_exponent: f64,
    pub min_periodic_word: Vec<u8>,
    /// Smallest finite-horizon co-norm rate over random driving words.
    pub min_finite_rate: f64,
}

/// Tabulates, for each `(α, γ)`, the weakest periodic expansion rate and
/// the weakest finite-time rate along random words. Descriptive only.
pub fn scan_bm_cocycle(
    alphas: &[f64],
    gammas: &[f64],
    max_period: usize,
    samples: usize,
    horizon: usize,
    seed: u64,
) -> Result<Vec<BmScanRow>, PipelineError> {
    if !(1..=20).contains(&max_period) || samples == 0 || horizon == 0 {
        return Err(PipelineError::BadParameters(
            "need 1 <= max_period <= 20, samples >= 1, horizon >= 1".into(),
        ));
    }
    let mut rows = Vec::with_capacity(alphas.len() * gammas.len());
    for &alpha in alphas {
        for &gamma in gammas {
            let sys = BmCocycle::new(alpha, gamma)?;
            let mut best = (f64::INFINITY, Vec::new());
            for n in 1..=max_period {
                for code in 0u32..(1 << n) {
                    let word: Vec<u8> = (0..n).map(|i| ((code >> i) & 1) as u8).collect();
                    let e = periodic_word_exponent(&sys, &word);
                    if e < best.0 {
                        best = (e, word);
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut finite = f64::INFINITY;
            for _ in 0..samples {
                let prefix: Vec<u8> = (0..horizon).map(|_| rng.random_range(0..2u8)).collect();
                let x = ShiftPoint::new(Word::new(prefix, vec![0])?, 0);
                finite = finite.min(min_lyapunov_estimate(&sys, &x, horizon)?.value);
            }
            rows.push(BmScanRow {
                alpha,
                gamma,
                min_periodic_exponent: best.0,
                min_periodic_word: best.1,
                min_finite_rate: finite,
            });
        }
    }
    Ok(rows)
}

/// `(1/n) log |μ_min|` for the product along a periodic word, which is the
/// minimal Lyapunov exponent at that periodic point.
fn periodic_word_exponent(sys: &BmCocycle, word: &[u8]) -> f64 {
    let mut m = Mat2::identity();
    let mut log_scale = 0.0;
    for &s in word {
        m = m.then(&sys.matrix(s));
        let big = m.max_abs_entry();
        m = m.scaled(1.0 / big);
        log_scale += big.ln();
    }
    let [[a, _], [_, d]] = m.0;
    let (tr, det) = (a + d, m.det());
    let disc = tr * tr - 4.0 * det;
    let small = if disc >= 0.0 {
        det.abs() / (0.5 * (tr.abs() + disc.sqrt()))
    } else {
        det.abs().sqrt()
    };
    (small.ln() + log_scale) / word.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Doubling, NeutralFixed, PlTent};
    use std::f64::consts::LN_2;

    #[test]
    fn doubling_fixed_point_is_abnormal_for_wide_band() {
        let v = verify_abnormal(&Doubling, &0.0, 1, 0.1, 0.8, 1e-12).unwrap();
        assert!(v.mean_below && v.suffixes_above);
        assert!((v.mean - LN_2).abs() < 1e-15);
    }

    #[test]
    fn doubling_mean_is_not_below_half() {
        let v = verify_abnormal(&Doubling, &0.0, 1, 0.1, 0.5, 1e-12).unwrap();
        assert!(!v.mean_below);
    }

    #[test]
    fn non_periodic_point_is_rejected() {
        let r = verify_abnormal(&Doubling, &0.1, 3, 0.1, 0.8, 1e-9);
        assert!(matches!(r, Err(PipelineError::Dynamics(DynamicsError::NotPeriodic { .. }))));
    }

    #[test]
    fn pl_tent_orbit_matches_arithmetic() {
        let m = PlTent::new(3.0, 1.5).unwrap();
        let (s1, s2) = m.slopes();
        let b = m.breakpoint();
        // 2-cycle with itinerary (0, 1): y = s1 x, x = s1 b + s2 (y − b) − 1
        let x = s2 * b / (s1 * s2 - 1.0);
        assert!(x < b && s1 * x >= b);
        let v = verify_abnormal(&m, &x, 2, 0.5, 0.9, 1e-12).unwrap();
        let mean = 0.5 * (s1.ln() + s2.ln());
        assert!((v.mean - mean).abs() < 1e-14);
        assert_eq!(v.mean_below, mean < 0.9);
        assert!((v.min_suffix - s2.ln().min(mean)).abs() < 1e-14);
    }

    #[test]
    fn search_finds_orbits_lingering_at_neutral_point() {
        let m = NeutralFixed::new(0.5).unwrap();
        let hits = search_abnormal(&m, 4..=12, 400, 0.3, 0.6, 11).unwrap();
        assert!(!hits.is_empty());
        for (orbit, v) in &hits {
            assert!(v.is_abnormal());
            let again = verify_abnormal(&m, &orbit.points()[0], orbit.period(), 0.3, 0.6, 1e-9).unwrap();
            assert_eq!(again, *v);
        }
    }

    #[test]
    fn cocycle_scan_matches_fixed_words() {
        let rows = scan_bm_cocycle(&[2.0], &[2.0], 4, 4, 64, 1).unwrap();
        let r = &rows[0];
        // 2·[[1,−1],[0,1]] has both eigenvalues 2
        assert!(r.min_periodic_exponent <= LN_2 + 1e-12);
        assert!(r.min_finite_rate.is_finite());
    }

    #[test]
    fn cycle_check_is_stepwise() {
        let o = PeriodicOrbit::from_cycle(&Doubling, vec![1.0 / 3.0, 2.0 / 3.0], 1e-12).unwrap();
        assert_eq!(o.period(), 2);
        assert!(PeriodicOrbit::from_cycle(&Doubling, vec![1.0 / 3.0, 0.6], 1e-9).is_err());
    }
}
