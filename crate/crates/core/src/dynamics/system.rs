use serde::{Deserialize, Serialize};

use super::linear::LinearMap;

/// Phase space of a [`MapSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// `ℝ/ℤ`, circumference 1.
    Circle,
    /// One-sided full shift over `{0, …, symbols−1}`.
    FullShift { symbols: u8 },
}

/// A local diffeomorphism (or a linear cocycle over a shift) with an
/// evaluable derivative and finitely many local inverse branches.
///
/// Implementations are immutable after construction and can be shared
/// across threads.
pub trait MapSystem: Send + Sync {
    type Point: Clone + std::fmt::Debug + Send + Sync + 'static;
    type Jacobian: LinearMap;

    fn domain(&self) -> Domain;

    fn eval(&self, x: &Self::Point) -> Self::Point;

    fn deriv(&self, x: &Self::Point) -> Self::Jacobian;

    /// All preimages of `x`, in a fixed branch order.
    fn inverse_branches(&self, x: &Self::Point) -> Vec<Self::Point>;

    /// `K ≥ sup_x max(‖D_x f‖, ‖(D_x f)⁻¹‖)`.
    fn lipschitz_bound(&self) -> f64;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// Number of inverse branches at every point.
    fn degree(&self) -> usize;

    /// Zoo name, e.g. `perturbed_doubling(0.05)`.
    fn name(&self) -> String;

    /// Whether the derivative is continuous on the short arc from `a` to `b`.
    /// Only piecewise-smooth maps override this.
    fn smooth_between(&self, _a: &Self::Point, _b: &Self::Point) -> bool {
        true
    }
}

/// Numerical tolerances shared by the estimators and checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Recomputation of increments and orbit consistency.
    pub eval: f64,
    /// Periodicity checks.
    pub per: f64,
    /// Inverse-branch consistency.
    pub inv: f64,
    /// Monotonicity of doubling-scale averages.
    pub mono: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        eval: 1e-10,
        per: 1e-9,
        inv: 1e-10,
        mono: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Reduces to `[0, 1)`.
pub fn wrap01(x: f64) -> f64 {
    let y = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Signed representative of `a − b` in `[−1/2, 1/2)`.
pub fn circle_diff(a: f64, b: f64) -> f64 {
    let d = wrap01(a - b);
    if d >= 0.5 {
        d - 1.0
    } else {
        d
    }
}

/// `d(x, y) = min(|x − y|, 1 − |x − y|)` on the unit circle.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    circle_diff(a, b).abs()
}

/// Whether the closed short arc between `a` and `b` contains one of `breaks`.
pub fn arc_contains_any(a: f64, b: f64, breaks: &[f64]) -> bool {
    let d = circle_diff(b, a);
    let (start, len) = if d >= 0.0 { (a, d) } else { (b, -d) };
    breaks.iter().any(|&p| {
        let off = wrap01(p - start);
        off <= len
    })
}

/// Iterates `f` from `x`, returning `(x, f(x), …, fⁿ(x))`.
pub fn orbit_points<S: MapSystem>(sys: &S, x: &S::Point, n: usize) -> Vec<S::Point> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(x.clone());
    for i in 0..n {
        let next = sys.eval(&out[i]);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_distance_wraps() {
        assert!((circle_distance(0.05, 0.95) - 0.1).abs() < 1e-15);
        assert!((circle_distance(0.2, 0.7) - 0.5).abs() < 1e-15);
        assert_eq!(circle_distance(0.3, 0.3), 0.0);
    }

    #[test]
    fn circle_diff_is_signed() {
        assert!((circle_diff(0.01, 0.99) - 0.02).abs() < 1e-15);
        assert!((circle_diff(0.99, 0.01) + 0.02).abs() < 1e-15);
    }

    #[test]
    fn arc_break_detection() {
        assert!(arc_contains_any(0.3, 0.4, &[0.35]));
        assert!(!arc_contains_any(0.3, 0.4, &[0.45]));
        assert!(arc_contains_any(0.98, 0.02, &[0.0]));
        assert!(arc_contains_any(0.02, 0.98, &[0.0]));
        assert!(arc_contains_any(0.0, 0.1, &[0.0]));
        assert!(!arc_contains_any(0.05, 0.1, &[0.0]));
    }

    #[test]
    fn wrap_stays_in_unit_interval() {
        assert_eq!(wrap01(-1e-18), 0.0);
        assert!((wrap01(2.25) - 0.25).abs() < 1e-15);
        assert!((wrap01(-0.25) - 0.75).abs() < 1e-15);
    }
}
