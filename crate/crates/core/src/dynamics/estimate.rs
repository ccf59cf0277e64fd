//! Birkhoff and subadditive (Kingman) estimators of the minimal Lyapunov
//! exponent `lim (1/n) log ‖D_x fⁿ‖_co`.

use serde::{Deserialize, Serialize};

use super::linear::{LinearMap, ProductAccumulator};
use super::system::MapSystem;
use super::DynamicsError;

/// Horizons in the trailing window used as a limsup proxy.
pub const LIMSUP_WINDOW: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Birkhoff,
    KingmanDoubling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    /// Nats per iterate.
    pub value: f64,
    pub horizon: usize,
    pub scheme: Scheme,
    /// Max of the value over the trailing horizons `horizon − 7 ..= horizon`
    /// (Birkhoff only).
    pub trailing_max: Option<f64>,
}

fn check_positive(name: &str, v: usize) -> Result<(), DynamicsError> {
    if v == 0 {
        Err(DynamicsError::BadParameter(format!("{name} must be at least 1")))
    } else {
        Ok(())
    }
}

/// `(1/h) log ‖D_x f^h‖_co` by composing derivatives along the orbit.
pub fn min_lyapunov_estimate<S: MapSystem>(
    sys: &S,
    x: &S::Point,
    horizon: usize,
) -> Result<ExponentEstimate, DynamicsError> {
    check_positive("horizon", horizon)?;
    let mut acc = ProductAccumulator::<S::Jacobian>::new();
    let mut y = x.clone();
    let mut trailing = f64::NEG_INFINITY;
    let mut value = 0.0;
    for n in 1..=horizon {
        acc.push(&sys.deriv(&y))?;
        y = sys.eval(&y);
        if n + LIMSUP_WINDOW > horizon {
            value = acc.log_conorm_rate(n);
            trailing = trailing.max(value);
        }
    }
    Ok(ExponentEstimate {
        value,
        horizon,
        scheme: Scheme::Birkhoff,
        trailing_max: Some(trailing),
    })
}

/// Doubling-scale averages `(1/k_ℓ) Σ_j (1/t_ℓ) φ(t_ℓ, f^{j t_ℓ} x)` with
/// `φ(t, y) = log ‖D_y f^t‖_co` and `t_ℓ = 2^ℓ t₁`.
///
/// Every level averages over the same window of `blocks · 2^{levels−1} · t₁`
/// iterates, so level `ℓ` uses `k_ℓ = blocks · 2^{levels−1−ℓ}` blocks. By
/// supermultiplicativity of the co-norm the sequence is then nondecreasing
/// in `ℓ` up to rounding.
pub fn kingman_doubling_average<S: MapSystem>(
    sys: &S,
    x: &S::Point,
    t1: usize,
    levels: usize,
    blocks: usize,
) -> Result<Vec<ExponentEstimate>, DynamicsError> {
    check_positive("t1", t1)?;
    check_positive("levels", levels)?;
    check_positive("blocks", blocks)?;
    if levels > 40 {
        return Err(DynamicsError::BadParameter("levels must be at most 40".into()));
    }
    let window = blocks
        .checked_mul(t1)
        .and_then(|w| w.checked_mul(1usize << (levels - 1)))
        .ok_or_else(|| DynamicsError::BadParameter("kingman window overflows".into()))?;
    let mut derivs = Vec::with_capacity(window);
    let mut y = x.clone();
    for _ in 0..window {
        derivs.push(sys.deriv(&y));
        y = sys.eval(&y);
    }
    let mut out = Vec::with_capacity(levels);
    for level in 0..levels {
        let t = t1 << level;
        let k = window / t;
        let mut rates = Vec::with_capacity(k);
        for block in derivs.chunks_exact(t) {
            let mut acc = ProductAccumulator::<S::Jacobian>::new();
            for d in block {
                acc.push(d)?;
            }
            rates.push(acc.log_conorm_rate(t));
        }
        // shifted mean: identical block rates average to themselves exactly
        let first = rates[0];
        let spread: f64 = rates.iter().map(|r| r - first).sum();
        out.push(ExponentEstimate {
            value: first + spread / k as f64,
            horizon: t,
            scheme: Scheme::KingmanDoubling,
            trailing_max: None,
        });
    }
    Ok(out)
}

/// Birkhoff average of log co-norm over one period starting at `p`.
pub fn period_average<S: MapSystem>(
    sys: &S,
    p: &S::Point,
    period: usize,
) -> Result<f64, DynamicsError> {
    check_positive("period", period)?;
    let mut y = p.clone();
    let mut sum = 0.0;
    for _ in 0..period {
        sum += sys.deriv(&y).conorm()?.ln();
        y = sys.eval(&y);
    }
    Ok(sum / period as f64)
}

/// `min` over the supplied periodic points of the period-average of log
/// co-norm. A positive value certifies nonuniform expansion on the sample.
pub fn expansion_indicator_over_set<S: MapSystem>(
    sys: &S,
    points: &[(S::Point, usize)],
    tol_per: f64,
) -> Result<f64, DynamicsError> {
    if points.is_empty() {
        return Err(DynamicsError::BadParameter("no periodic points supplied".into()));
    }
    let mut best = f64::INFINITY;
    for (index, (p, period)) in points.iter().enumerate() {
        check_positive("period", *period)?;
        let mut y = p.clone();
        for _ in 0..*period {
            y = sys.eval(&y);
        }
        let drift = sys.distance(&y, p);
        if !(drift <= tol_per) {
            return Err(DynamicsError::NotPeriodic {
                index,
                point: format!("{p:?}"),
                period: *period,
                drift,
            });
        }
        best = best.min(period_average(sys, p, *period)?);
    }
    Ok(best)
}
