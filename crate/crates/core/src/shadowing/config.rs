use serde::{Deserialize, Serialize};

use super::{CircleMap, ShadowError};
use crate::dynamics::Tolerances;
use crate::sampling::halton;

/// Base points and offsets used when searching for the chart radius `r`.
const MODULUS_BASE_POINTS: u64 = 1000;
const MODULUS_OFFSETS: usize = 33;

/// Constants threading the closing construction together.
///
/// Invariants checked at construction:
/// `(1 − τ) e^λ ≥ 1/γ`, `ε₁ = 2ε_c(1 + γ)/(1 − γ) < 1`,
/// `ς = (1 − γ)(1 − ε₁)/(2(1 + γ))`, `0 < r ≤ ε`, `0 < δ ≤ r ς`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowingConfig {
    pub lambda: f64,
    pub epsilon: f64,
    pub tau: f64,
    pub gamma: f64,
    pub eps_contraction: f64,
    pub eps1: f64,
    pub sigma: f64,
    /// Lipschitz budget `ς/(K e^λ)` for the unrescaled remainders.
    pub sigma_hat: f64,
    pub lipschitz: f64,
    pub r: f64,
    pub delta: f64,
    /// Stop when successive sweeps differ by less than this.
    pub tol_fix: f64,
    pub max_iter: usize,
    pub tol: Tolerances,
}

impl ShadowingConfig {
    /// Validates an explicit set of constants. `lipschitz` is the map's `K`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: f64,
        epsilon: f64,
        tau: f64,
        gamma: f64,
        eps_contraction: f64,
        r: f64,
        delta: f64,
        lipschitz: f64,
    ) -> Result<Self, ShadowError> {
        let bad = |m: String| Err(ShadowError::BadConfig(m));
        if !(lambda > 0.0 && lambda.is_finite()) {
            return bad(format!("lambda must be positive, got {lambda}"));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {epsilon}"));
        }
        if !(tau > 0.0 && tau < 1.0) {
            return bad(format!("tau must lie in (0, 1), got {tau}"));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return bad(format!("gamma must lie in (0, 1), got {gamma}"));
        }
        if (1.0 - tau) * lambda.exp() * gamma < 1.0 - 1e-12 {
            return bad(format!("(1 - tau) e^lambda >= 1/gamma fails for tau = {tau}, gamma = {gamma}"));
        }
        let eps1 = 2.0 * eps_contraction * (1.0 + gamma) / (1.0 - gamma);
        if !(eps_contraction > 0.0 && eps1 < 1.0) {
            return bad(format!("eps_contraction = {eps_contraction} gives eps1 = {eps1}, need eps1 < 1"));
        }
        if !(lipschitz >= 1.0 && lipschitz.is_finite()) {
            return bad(format!("Lipschitz bound K must be at least 1, got {lipschitz}"));
        }
        let sigma = (1.0 - gamma) * (1.0 - eps1) / (2.0 * (1.0 + gamma));
        if !(r > 0.0 && r <= epsilon) {
            return bad(format!("r must lie in (0, epsilon], got {r}"));
        }
        if !(delta > 0.0 && delta <= r * sigma * (1.0 + 1e-12)) {
            return bad(format!("delta must lie in (0, r*sigma] = (0, {}], got {delta}", r * sigma));
        }
        Ok(Self {
            lambda,
            epsilon,
            tau,
            gamma,
            eps_contraction,
            eps1,
            sigma,
            sigma_hat: sigma / (lipschitz * lambda.exp()),
            lipschitz,
            r,
            delta,
            tol_fix: 1e-12,
            max_iter: 100_000,
            tol: Tolerances::DEFAULT,
        })
    }

    /// Derives every constant from `(λ, ε)` for a concrete map.
    ///
    /// `τ = (1 − e^{−λ/2})/2`, `γ = ((1 − τ)e^λ)^{−1}`, `ε_c` chosen so that
    /// `ε₁ = 1/2`. The chart radius `r` is the largest `ε·2^{−i}` for which
    /// the sampled modulus of continuity of `f′` over an `r`-ball stays below
    /// `ς̂/2`; offsets that cross a derivative break are skipped. Then
    /// `δ = r ς`.
    pub fn plan<S: CircleMap>(sys: &S, lambda: f64, epsilon: f64) -> Result<Self, ShadowError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ShadowError::BadConfig(format!("lambda must be positive, got {lambda}")));
        }
        let tau = (1.0 - (-lambda / 2.0).exp()) / 2.0;
        let gamma = (1.0 / ((1.0 - tau) * lambda.exp())).min(1.0 - 1e-12);
        let eps_contraction = (1.0 - gamma) / (4.0 * (1.0 + gamma));
        let k = sys.lipschitz_bound().max(1.0);
        let sigma = (1.0 - gamma) * 0.5 / (2.0 * (1.0 + gamma));
        let sigma_hat = sigma / (k * lambda.exp());
        let mut r = epsilon.min(0.25);
        while r > 1e-15 && modulus(sys, r) * 2.0 > sigma_hat {
            r *= 0.5;
        }
        if r <= 1e-15 {
            return Err(ShadowError::BadConfig(
                "no chart radius keeps the remainder Lipschitz bound".into(),
            ));
        }
        Self::new(lambda, epsilon, tau, gamma, eps_contraction, r, r * sigma, k)
    }

    /// The same constants with a smaller `δ`.
    pub fn with_delta(&self, delta: f64) -> Result<Self, ShadowError> {
        if !(delta > 0.0 && delta <= self.r * self.sigma) {
            return Err(ShadowError::BadConfig(format!(
                "delta must lie in (0, {}], got {delta}",
                self.r * self.sigma
            )));
        }
        Ok(Self { delta, ..self.clone() })
    }

    pub fn with_tolerances(&self, tol: Tolerances) -> Self {
        Self { tol, ..self.clone() }
    }

    /// `δ/ς`, the a priori bound on the fixed point.
    pub fn fixed_point_bound(&self) -> f64 {
        self.delta / self.sigma
    }
}

/// Sampled `sup |f′(x + u) − f′(x)|` over `|u| ≤ r`.
fn modulus<S: CircleMap>(sys: &S, r: f64) -> f64 {
    let mut worst = 0.0_f64;
    for i in 1..=MODULUS_BASE_POINTS {
        let x = halton(i, 2);
        let dx = sys.deriv(&x);
        for k in 0..MODULUS_OFFSETS {
            let u = r * (2.0 * k as f64 / (MODULUS_OFFSETS - 1) as f64 - 1.0);
            let y = x + u;
            if !sys.smooth_between(&x, &crate::dynamics::wrap01(y)) {
                continue;
            }
            worst = worst.max((sys.deriv(&y) - dx).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Doubling, PerturbedDoubling, PlTent};

    #[test]
    fn doubling_plan_uses_full_radius() {
        let c = ShadowingConfig::plan(&Doubling, 0.5, 0.01).unwrap();
        assert_eq!(c.r, 0.01);
        assert!((c.eps1 - 0.5).abs() < 1e-12);
        assert!((c.delta - c.r * c.sigma).abs() < 1e-18);
        assert!((1.0 - c.tau) * c.lambda.exp() * c.gamma >= 1.0 - 1e-12);
    }

    #[test]
    fn smooth_perturbation_shrinks_radius() {
        let m = PerturbedDoubling::new(0.05).unwrap();
        let c = ShadowingConfig::plan(&m, 0.5, 0.05).unwrap();
        assert!(c.r < 0.05);
        assert!(2.0 * modulus(&m, c.r) <= c.sigma_hat);
    }

    #[test]
    fn piecewise_linear_breaks_are_skipped() {
        let m = PlTent::new(3.0, 1.5).unwrap();
        let c = ShadowingConfig::plan(&m, 0.5, 0.05).unwrap();
        assert_eq!(c.r, 0.05);
    }

    #[test]
    fn rejects_broken_chains() {
        assert!(ShadowingConfig::new(0.5, 0.01, 0.1, 0.3, 0.01, 0.01, 1e-4, 2.0).is_err());
        assert!(ShadowingConfig::new(0.5, 0.01, 0.1, 0.68, 0.5, 0.01, 1e-4, 2.0).is_err());
        assert!(ShadowingConfig::new(0.5, 0.01, 0.1, 0.68, 0.01, 0.02, 1e-4, 2.0).is_err());
        assert!(ShadowingConfig::new(0.5, 0.01, 0.1, 0.68, 0.01, 0.01, 1e-4, 2.0).is_ok());
    }
}
