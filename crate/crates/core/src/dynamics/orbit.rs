use super::linear::LinearMap;
use super::system::MapSystem;
use super::DynamicsError;

/// An orbit segment `(x, f(x), …, f^k(x))` with its log co-norm increments
/// `aᵢ = log ‖D_{fⁱ(x)} f‖_co`.
///
/// Points are stored explicitly so that a string can also carry a
/// pseudo-orbit whose consecutive points agree with `f` only to a tolerance.
#[derive(Debug, Clone)]
pub struct OrbitString<P> {
    points: Vec<P>,
    increments: Vec<f64>,
}

/// Builds the orbit string of length `k ≥ 1` starting at `x`.
pub fn orbit_string<S: MapSystem>(
    sys: &S,
    x: &S::Point,
    k: usize,
) -> Result<OrbitString<S::Point>, DynamicsError> {
    if k == 0 {
        return Err(DynamicsError::BadParameter("orbit string length must be at least 1".into()));
    }
    let mut points = Vec::with_capacity(k + 1);
    let mut increments = Vec::with_capacity(k);
    points.push(x.clone());
    for i in 0..k {
        increments.push(sys.deriv(&points[i]).conorm()?.ln());
        let next = sys.eval(&points[i]);
        points.push(next);
    }
    Ok(OrbitString { points, increments })
}

impl<P: Clone> OrbitString<P> {
    /// Wraps explicit points `p₀, …, p_k`, checking `d(f(pᵢ), pᵢ₊₁) ≤ tol`.
    pub fn from_points<S: MapSystem<Point = P>>(
        sys: &S,
        points: Vec<P>,
        tol: f64,
    ) -> Result<Self, DynamicsError> {
        if points.len() < 2 {
            return Err(DynamicsError::BadParameter("orbit string needs at least two points".into()));
        }
        let mut increments = Vec::with_capacity(points.len() - 1);
        for (step, w) in points.windows(2).enumerate() {
            let drift = sys.distance(&sys.eval(&w[0]), &w[1]);
            if !(drift <= tol) {
                return Err(DynamicsError::InconsistentOrbit { step, drift });
            }
            increments.push(sys.deriv(&w[0]).conorm()?.ln());
        }
        Ok(Self { points, increments })
    }

    /// Length `k` (number of increments).
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn base(&self) -> &P {
        &self.points[0]
    }

    /// `f^k(x)`, the last point.
    pub fn end(&self) -> &P {
        &self.points[self.len()]
    }

    /// All `k + 1` points.
    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn sum(&self) -> f64 {
        self.increments.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.len() as f64
    }

    /// The sub-string starting at index `start` with `len` increments.
    pub fn segment(&self, start: usize, len: usize) -> Result<Self, DynamicsError> {
        if len == 0 || start + len > self.len() {
            return Err(DynamicsError::BadParameter(format!(
                "segment [{start}, {}) outside string of length {}",
                start + len,
                self.len()
            )));
        }
        Ok(Self {
            points: self.points[start..=start + len].to_vec(),
            increments: self.increments[start..start + len].to_vec(),
        })
    }

    /// Largest `|aᵢ − log conorm(D_{pᵢ} f)|` after recomputation.
    pub fn increment_drift<S: MapSystem<Point = P>>(&self, sys: &S) -> Result<f64, DynamicsError> {
        let mut worst = 0.0_f64;
        for (p, a) in self.points.iter().zip(&self.increments) {
            worst = worst.max((sys.deriv(p).conorm()?.ln() - a).abs());
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::cocycle::{BmCocycle, ShiftPoint};
    use crate::dynamics::zoo::{Doubling, PerturbedDoubling};
    use std::f64::consts::LN_2;

    #[test]
    fn doubling_increments_are_log_two() {
        let s = orbit_string(&Doubling, &0.3, 4).unwrap();
        assert_eq!(s.increments(), &[LN_2; 4]);
        assert_eq!(s.points().len(), 5);
    }

    #[test]
    fn cocycle_increments_match_golden_conorm() {
        let c = BmCocycle::new(2.0, 2.0).unwrap();
        let x = ShiftPoint::periodic(vec![0, 1]).unwrap();
        let s = orbit_string(&c, &x, 2).unwrap();
        let expected = (5f64.sqrt() - 1.0).ln();
        for a in s.increments() {
            assert!((a - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_length_is_rejected() {
        assert!(orbit_string(&Doubling, &0.1, 0).is_err());
    }

    #[test]
    fn from_points_rejects_broken_orbits() {
        assert!(OrbitString::from_points(&Doubling, vec![0.1, 0.2, 0.4], 1e-12).is_ok());
        let err = OrbitString::from_points(&Doubling, vec![0.1, 0.2, 0.5], 1e-12).unwrap_err();
        assert!(matches!(err, DynamicsError::InconsistentOrbit { step: 1, .. }));
    }

    #[test]
    fn increments_are_recomputable() {
        let m = PerturbedDoubling::new(0.3).unwrap();
        let s = orbit_string(&m, &0.123, 50).unwrap();
        assert!(s.increment_drift(&m).unwrap() <= 1e-10);
        let seg = s.segment(10, 5).unwrap();
        assert_eq!(seg.increments(), &s.increments()[10..15]);
        assert_eq!(seg.end(), &s.points()[15]);
    }
}
