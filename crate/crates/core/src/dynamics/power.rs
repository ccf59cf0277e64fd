use super::linear::LinearMap;
use super::system::{Domain, MapSystem};

/// The iterate `f^κ` of a map, exposed as a map in its own right.
#[derive(Debug, Clone)]
pub struct PowerMap<S> {
    inner: S,
    power: usize,
}

impl<S: MapSystem> PowerMap<S> {
    /// Panics if `power == 0`.
    pub fn new(inner: S, power: usize) -> Self {
        assert!(power >= 1, "power must be at least 1");
        Self { inner, power }
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

impl<S: MapSystem> MapSystem for PowerMap<S> {
    type Point = S::Point;
    type Jacobian = S::Jacobian;

    fn domain(&self) -> Domain {
        self.inner.domain()
    }

    fn eval(&self, x: &S::Point) -> S::Point {
        let mut y = x.clone();
        for _ in 0..self.power {
            y = self.inner.eval(&y);
        }
        y
    }

    fn deriv(&self, x: &S::Point) -> S::Jacobian {
        let mut y = x.clone();
        let mut d = S::Jacobian::identity();
        for _ in 0..self.power {
            d = d.then(&self.inner.deriv(&y));
            y = self.inner.eval(&y);
        }
        d
    }

    fn inverse_branches(&self, x: &S::Point) -> Vec<S::Point> {
        let mut level = vec![x.clone()];
        for _ in 0..self.power {
            level = level
                .iter()
                .flat_map(|p| self.inner.inverse_branches(p))
                .collect();
        }
        level
    }

    fn lipschitz_bound(&self) -> f64 {
        self.inner.lipschitz_bound().powi(self.power as i32)
    }

    fn distance(&self, a: &S::Point, b: &S::Point) -> f64 {
        self.inner.distance(a, b)
    }

    fn degree(&self) -> usize {
        self.inner.degree().pow(self.power as u32)
    }

    fn name(&self) -> String {
        if self.power == 1 {
            self.inner.name()
        } else {
            format!("{}^{}", self.inner.name(), self.power)
        }
    }

    /// `f^κ` is smooth on the short arc `[a, b]` when every intermediate
    /// image arc avoids the breaks of `f`.
    fn smooth_between(&self, a: &S::Point, b: &S::Point) -> bool {
        let (mut x, mut y) = (a.clone(), b.clone());
        for _ in 0..self.power {
            if !self.inner.smooth_between(&x, &y) {
                return false;
            }
            x = self.inner.eval(&x);
            y = self.inner.eval(&y);
        }
        true
    }
}
