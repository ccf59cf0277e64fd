use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::dynamics::{MapSystem, ProductAccumulator};

/// Number of candidate exponents, evenly spaced on `[0, log K]`.
pub const LAMBDA_GRID: usize = 1000;

/// Slack for comparing margins at long and short times.
const FEASIBILITY_TOL: f64 = 1e-9;

/// Fitted constants in `log ‖D_x f^k‖_co ≥ log C + kλ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionFit {
    pub c: f64,
    pub lambda: f64,
    pub k_max: usize,
    pub samples: usize,
    /// Set when no positive `λ` fits the sample.
    pub diagnostic: Option<String>,
}

impl ExpansionFit {
    pub fn is_expanding(&self) -> bool {
        self.lambda > 0.0
    }
}

/// Fits `(C, λ)` with `log ‖D_x f^k‖_co ≥ log C + kλ` on every sample point
/// and every `k ≤ k_max`.
///
/// On a finite sample any `λ` fits with a small enough `C`, so a grid value
/// is accepted only if the margin `L_k(x) − kλ` does not keep falling: its
/// minimum over `k ∈ (k_max/2, k_max]` must be at least its minimum over
/// `k ≤ k_max/2` at every point. Acceptance is downward closed in `λ`, and
/// adding points only adds constraints. `C` is then the tightest constant
/// for the chosen `λ`.
pub fn estimate_expansion_constants<S: MapSystem>(
    sys: &S,
    points: &[S::Point],
    k_max: usize,
) -> Result<ExpansionFit, PipelineError> {
    if points.is_empty() {
        return Err(PipelineError::BadParameters("no sample points".into()));
    }
    if k_max < 2 {
        return Err(PipelineError::BadParameters("k_max must be at least 2".into()));
    }
    let logs = points
        .iter()
        .map(|x| conorm_logs(sys, x, k_max))
        .collect::<Result<Vec<_>, _>>()?;
    let top = sys.lipschitz_bound().ln().max(0.0);
    let half = k_max / 2;
    let feasible = |lambda: f64| {
        logs.iter().all(|l| {
            let margin = |k: usize| l[k - 1] - k as f64 * lambda;
            let early = (1..=half).map(margin).fold(f64::INFINITY, f64::min);
            let late = (half + 1..=k_max).map(margin).fold(f64::INFINITY, f64::min);
            late >= early - FEASIBILITY_TOL
        })
    };
    let step = top / (LAMBDA_GRID - 1) as f64;
    let best = (0..LAMBDA_GRID)
        .rev()
        .map(|i| if i == LAMBDA_GRID - 1 { top } else { i as f64 * step })
        .find(|&l| feasible(l));
    let lambda = best.unwrap_or(0.0);
    let log_c = logs
        .iter()
        .flat_map(|l| l.iter().enumerate().map(|(i, v)| v - (i + 1) as f64 * lambda))
        .fold(f64::INFINITY, f64::min);
    let diagnostic = match best {
        None => Some("co-norms shrink along the sample; no nonnegative rate fits".to_string()),
        Some(l) if l <= 0.0 => Some(
            "no positive rate fits the sample; uniform expansion fails on these points".to_string(),
        ),
        Some(_) => None,
    };
    Ok(ExpansionFit {
        c: log_c.exp(),
        lambda,
        k_max,
        samples: points.len(),
        diagnostic,
    })
}

/// `log ‖D_x f^k‖_co` for `k = 1..=k_max`.
fn conorm_logs<S: MapSystem>(sys: &S, x: &S::Point, k_max: usize) -> Result<Vec<f64>, PipelineError> {
    let mut acc = ProductAccumulator::<S::Jacobian>::new();
    let mut y = x.clone();
    let mut out = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        acc.push(&sys.deriv(&y))?;
        out.push(acc.log_conorm());
        y = sys.eval(&y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Doubling, NeutralFixed, PlTent};
    use std::f64::consts::LN_2;

    #[test]
    fn doubling_fits_unit_constant_and_log_two() {
        let fit = estimate_expansion_constants(&Doubling, &[0.1, 0.37, 0.9], 20).unwrap();
        assert!((fit.lambda - LN_2).abs() < 1e-15);
        assert!((fit.c - 1.0).abs() < 1e-12);
        assert!(fit.diagnostic.is_none());
    }

    #[test]
    fn neutral_point_blocks_expansion() {
        let m = NeutralFixed::new(0.5).unwrap();
        let fit = estimate_expansion_constants(&m, &[0.0, 0.4], 20).unwrap();
        assert!(fit.lambda <= 0.0);
        assert!(fit.diagnostic.is_some());
        assert!(!fit.is_expanding());
    }

    #[test]
    fn fitted_pair_holds_everywhere() {
        let m = PlTent::new(3.0, 1.5).unwrap();
        let pts = [0.05, 0.21, 0.5, 0.77];
        let fit = estimate_expansion_constants(&m, &pts, 12).unwrap();
        assert!(fit.lambda > 0.0);
        for x in pts {
            let l = conorm_logs(&m, &x, 12).unwrap();
            for (i, v) in l.iter().enumerate() {
                assert!(*v >= fit.c.ln() + (i + 1) as f64 * fit.lambda - 1e-12);
            }
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(estimate_expansion_constants(&Doubling, &[], 5).is_err());
        assert!(estimate_expansion_constants(&Doubling, &[0.2], 1).is_err());
    }
}
