use serde::{Deserialize, Serialize};

use super::{CircleMap, ShadowError, ShadowingConfig};
use crate::dynamics::{circle_diff, circle_distance};
use crate::sampling::halton;

/// Sample pairs for the Lipschitz estimate of the remainder.
const LIP_SAMPLES: u64 = 1000;
/// Safety factor applied to sampled difference quotients.
const LIP_SAFETY: f64 = 2.0;

/// The lift `Φ(v) = f(x + v) − y` of `f` at `(x, y)` in arc-length charts,
/// split as `H v + φ(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lift {
    pub x: f64,
    pub y: f64,
    /// `H = f′(x)`.
    pub h: f64,
    /// `φ(0) = f(x) − y` as a signed chart coordinate.
    pub phi0: f64,
    /// Sampled `Lip(φ)` over the `r`-ball with a 2× safety factor.
    pub lip_phi_bound: f64,
}

impl Lift {
    /// `Φ(v)` in the chart at `y`.
    pub fn apply<S: CircleMap>(&self, sys: &S, v: f64) -> f64 {
        circle_diff(sys.eval(&(self.x + v)), self.y)
    }

    /// `φ(v) = Φ(v) − H v`.
    pub fn phi<S: CircleMap>(&self, sys: &S, v: f64) -> f64 {
        self.apply(sys, v) - self.h * v
    }
}

pub(crate) fn lift_with_samples<S: CircleMap>(
    sys: &S,
    x: f64,
    y: f64,
    radius: f64,
    samples: u64,
) -> Lift {
    let h = sys.deriv(&x);
    let mut lift = Lift {
        x,
        y,
        h,
        phi0: circle_diff(sys.eval(&x), y),
        lip_phi_bound: 0.0,
    };
    let mut worst = 0.0_f64;
    for i in 1..=samples {
        let a = radius * (2.0 * halton(i, 2) - 1.0);
        let b = radius * (2.0 * halton(i, 3) - 1.0);
        // near-coincident pairs only measure rounding noise
        if (a - b).abs() < 1e-3 * radius {
            continue;
        }
        let q = (lift.phi(sys, a) - lift.phi(sys, b)) / (a - b);
        worst = worst.max(q.abs());
    }
    lift.lip_phi_bound = LIP_SAFETY * worst;
    lift
}

/// Builds the lift at `(x, y)`, requiring `d(f(x), y) ≤ r`.
pub fn build_lift<S: CircleMap>(
    sys: &S,
    x: f64,
    y: f64,
    cfg: &ShadowingConfig,
) -> Result<Lift, ShadowError> {
    let gap = circle_distance(sys.eval(&x), y);
    if !(gap <= cfg.r) {
        return Err(ShadowError::GapTooLarge {
            index: 0,
            gap,
            limit: cfg.r,
        });
    }
    Ok(lift_with_samples(sys, x, y, cfg.r, LIP_SAMPLES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Doubling, MapSystem, PerturbedDoubling};

    #[test]
    fn exact_orbit_has_zero_remainder_at_origin() {
        let m = PerturbedDoubling::new(0.05).unwrap();
        let cfg = ShadowingConfig::plan(&m, 0.5, 0.05).unwrap();
        let l = build_lift(&m, 0.3, m.eval(&0.3), &cfg).unwrap();
        assert_eq!(l.phi0, 0.0);
    }

    #[test]
    fn doubling_lift_is_linear() {
        let cfg = ShadowingConfig::plan(&Doubling, 0.5, 0.01).unwrap();
        let l = build_lift(&Doubling, 0.3, 0.6, &cfg).unwrap();
        assert_eq!(l.h, 2.0);
        assert!(l.lip_phi_bound < 1e-9);
        assert!(l.phi(&Doubling, 0.004).abs() < 1e-15);
    }

    #[test]
    fn far_target_is_rejected() {
        let cfg = ShadowingConfig::plan(&Doubling, 0.5, 0.01).unwrap();
        assert!(matches!(
            build_lift(&Doubling, 0.3, 0.7, &cfg),
            Err(ShadowError::GapTooLarge { .. })
        ));
    }

    #[test]
    fn perturbed_lift_meets_planned_bounds() {
        let m = PerturbedDoubling::new(0.05).unwrap();
        let cfg = ShadowingConfig::plan(&m, 0.5, 0.05).unwrap();
        for i in 1..50u64 {
            let x = halton(i, 5);
            let y = m.eval(&x) + cfg.delta / 2.0;
            let l = build_lift(&m, x, y, &cfg).unwrap();
            assert!(l.phi0.abs() <= cfg.delta);
            assert!(l.lip_phi_bound <= cfg.sigma_hat, "{} > {}", l.lip_phi_bound, cfg.sigma_hat);
        }
    }
}
