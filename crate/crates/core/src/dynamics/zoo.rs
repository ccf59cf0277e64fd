//! Concrete circle maps of degree two.
//!
//! | name                     | map                                            |
//! |--------------------------|------------------------------------------------|
//! | `doubling`               | `x ↦ 2x mod 1`                                  |
//! | `perturbed_doubling(ε)`  | `x ↦ 2x + ε·sin(2πx)/(2π) mod 1`, `|ε| < 1`      |
//! | `neutral_fixed(α)`       | `x(1 + (2x)^α)` on `[0,½)`, `2x − 1` on `[½,1)` |
//! | `pl_tent(s₁,s₂)`         | slope `s₁` on `[0,a)`, `s₂` on `[a,1)`, degree 2 |
//!
//! Every map here is an orientation-preserving covering of degree two with
//! `f(0) = 0`, so the inverse branches come from inverting the monotone lift
//! `F : [0,1) → [0,2)` at `x` and `x + 1`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::cocycle::BmCocycle;
use super::system::{arc_contains_any, circle_distance, wrap01, Domain, MapSystem};
use super::DynamicsError;

/// Inverts an increasing function on `[0, hi]` by safeguarded Newton.
fn invert_monotone(
    target: f64,
    hi: f64,
    value: impl Fn(f64) -> f64,
    slope: impl Fn(f64) -> f64,
) -> f64 {
    let (mut lo, mut up) = (0.0_f64, hi);
    let mut y = (target / value(hi) * hi).clamp(0.0, hi);
    for _ in 0..200 {
        let r = value(y) - target;
        if r == 0.0 {
            return y;
        }
        if r > 0.0 {
            up = y;
        } else {
            lo = y;
        }
        let mut next = y - r / slope(y);
        if !(next > lo && next < up) {
            next = 0.5 * (lo + up);
        }
        if (next - y).abs() <= 1e-17 || up - lo <= 1e-17 {
            return next;
        }
        y = next;
    }
    y
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Doubling;

impl MapSystem for Doubling {
    type Point = f64;
    type Jacobian = f64;

    fn domain(&self) -> Domain {
        Domain::Circle
    }

    fn eval(&self, x: &f64) -> f64 {
        wrap01(2.0 * x)
    }

    fn deriv(&self, _x: &f64) -> f64 {
        2.0
    }

    fn inverse_branches(&self, x: &f64) -> Vec<f64> {
        let x = wrap01(*x);
        vec![x / 2.0, (x + 1.0) / 2.0]
    }

    fn lipschitz_bound(&self) -> f64 {
        2.0
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        circle_distance(*a, *b)
    }

    fn degree(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        "doubling".into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbedDoubling {
    eps: f64,
}

impl PerturbedDoubling {
    pub fn new(eps: f64) -> Result<Self, DynamicsError> {
        if !(eps.is_finite() && eps.abs() < 1.0) {
            return Err(DynamicsError::BadParameter(format!(
                "perturbed_doubling needs |eps| < 1, got {eps}"
            )));
        }
        Ok(Self { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    fn lift(&self, y: f64) -> f64 {
        2.0 * y + self.eps * (TAU * y).sin() / TAU
    }

    fn lift_slope(&self, y: f64) -> f64 {
        2.0 + self.eps * (TAU * y).cos()
    }
}

impl MapSystem for PerturbedDoubling {
    type Point = f64;
    type Jacobian = f64;

    fn domain(&self) -> Domain {
        Domain::Circle
    }

    fn eval(&self, x: &f64) -> f64 {
        wrap01(self.lift(*x))
    }

    fn deriv(&self, x: &f64) -> f64 {
        self.lift_slope(*x)
    }

    fn inverse_branches(&self, x: &f64) -> Vec<f64> {
        let x = wrap01(*x);
        [x, x + 1.0]
            .into_iter()
            .map(|t| wrap01(invert_monotone(t, 1.0, |y| self.lift(y), |y| self.lift_slope(y))))
            .collect()
    }

    fn lipschitz_bound(&self) -> f64 {
        let e = self.eps.abs();
        (2.0 + e).max(1.0 / (2.0 - e))
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        circle_distance(*a, *b)
    }

    fn degree(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        format!("perturbed_doubling({})", self.eps)
    }
}

/// Liverani–Saussol–Vaienti map with a neutral fixed point at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeutralFixed {
    alpha: f64,
}

impl NeutralFixed {
    pub fn new(alpha: f64) -> Result<Self, DynamicsError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(DynamicsError::BadParameter(format!(
                "neutral_fixed needs alpha > 0, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn left(&self, y: f64) -> f64 {
        y * (1.0 + (2.0 * y).powf(self.alpha))
    }

    fn left_slope(&self, y: f64) -> f64 {
        1.0 + (1.0 + self.alpha) * (2.0 * y).powf(self.alpha)
    }
}

impl MapSystem for NeutralFixed {
    type Point = f64;
    type Jacobian = f64;

    fn domain(&self) -> Domain {
        Domain::Circle
    }

    fn eval(&self, x: &f64) -> f64 {
        let x = wrap01(*x);
        if x < 0.5 {
            wrap01(self.left(x))
        } else {
            wrap01(2.0 * x - 1.0)
        }
    }

    fn deriv(&self, x: &f64) -> f64 {
        let x = wrap01(*x);
        if x < 0.5 {
            self.left_slope(x)
        } else {
            2.0
        }
    }

    fn inverse_branches(&self, x: &f64) -> Vec<f64> {
        let x = wrap01(*x);
        let left = invert_monotone(x, 0.5, |y| self.left(y), |y| self.left_slope(y));
        vec![left.min(0.5_f64.next_down()), (x + 1.0) / 2.0]
    }

    fn lipschitz_bound(&self) -> f64 {
        2.0 + self.alpha
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        circle_distance(*a, *b)
    }

    fn degree(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        format!("neutral_fixed({})", self.alpha)
    }

    fn smooth_between(&self, a: &f64, b: &f64) -> bool {
        !arc_contains_any(*a, *b, &[0.0, 0.5])
    }
}

/// Piecewise-linear degree-two circle map with slopes `s₁` on `[0,a)` and
/// `s₂` on `[a,1)`, where `s₁a + s₂(1−a) = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlTent {
    s1: f64,
    s2: f64,
    brk: f64,
}

impl PlTent {
    pub fn new(s1: f64, s2: f64) -> Result<Self, DynamicsError> {
        if !(s1.is_finite() && s2.is_finite() && s1 > 0.0 && s2 > 0.0) {
            return Err(DynamicsError::BadParameter(format!(
                "pl_tent slopes must be positive, got ({s1}, {s2})"
            )));
        }
        let brk = (2.0 - s2) / (s1 - s2);
        if !(brk > 0.0 && brk < 1.0) {
            return Err(DynamicsError::BadParameter(format!(
                "pl_tent({s1},{s2}) has no degree-two breakpoint: slopes must straddle 2"
            )));
        }
        Ok(Self { s1, s2, brk })
    }

    pub fn slopes(&self) -> (f64, f64) {
        (self.s1, self.s2)
    }

    /// Breakpoint `a` between the two linear pieces.
    pub fn breakpoint(&self) -> f64 {
        self.brk
    }

    /// 0 on `[0,a)`, 1 on `[a,1)`.
    pub fn branch_of(&self, x: f64) -> usize {
        usize::from(wrap01(x) >= self.brk)
    }

    fn lift(&self, y: f64) -> f64 {
        if y < self.brk {
            self.s1 * y
        } else {
            self.s1 * self.brk + self.s2 * (y - self.brk)
        }
    }

    fn lift_inverse(&self, t: f64) -> f64 {
        let knee = self.s1 * self.brk;
        if t < knee {
            t / self.s1
        } else {
            self.brk + (t - knee) / self.s2
        }
    }
}

impl MapSystem for PlTent {
    type Point = f64;
    type Jacobian = f64;

    fn domain(&self) -> Domain {
        Domain::Circle
    }

    fn eval(&self, x: &f64) -> f64 {
        wrap01(self.lift(wrap01(*x)))
    }

    fn deriv(&self, x: &f64) -> f64 {
        if wrap01(*x) < self.brk {
            self.s1
        } else {
            self.s2
        }
    }

    fn inverse_branches(&self, x: &f64) -> Vec<f64> {
        let x = wrap01(*x);
        vec![wrap01(self.lift_inverse(x)), wrap01(self.lift_inverse(x + 1.0))]
    }

    fn lipschitz_bound(&self) -> f64 {
        let lo = self.s1.min(self.s2);
        self.s1.max(self.s2).max(1.0 / lo)
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        circle_distance(*a, *b)
    }

    fn degree(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        format!("pl_tent({},{})", self.s1, self.s2)
    }

    fn smooth_between(&self, a: &f64, b: &f64) -> bool {
        !arc_contains_any(*a, *b, &[0.0, self.brk])
    }
}

/// Any of the circle maps above behind one type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircleZoo {
    Doubling(Doubling),
    PerturbedDoubling(PerturbedDoubling),
    NeutralFixed(NeutralFixed),
    PlTent(PlTent),
}

macro_rules! delegate {
    ($self:ident, $m:ident => $body:expr) => {
        match $self {
            CircleZoo::Doubling($m) => $body,
            CircleZoo::PerturbedDoubling($m) => $body,
            CircleZoo::NeutralFixed($m) => $body,
            CircleZoo::PlTent($m) => $body,
        }
    };
}

impl MapSystem for CircleZoo {
    type Point = f64;
    type Jacobian = f64;

    fn domain(&self) -> Domain {
        Domain::Circle
    }

    fn eval(&self, x: &f64) -> f64 {
        delegate!(self, m => m.eval(x))
    }

    fn deriv(&self, x: &f64) -> f64 {
        delegate!(self, m => m.deriv(x))
    }

    fn inverse_branches(&self, x: &f64) -> Vec<f64> {
        delegate!(self, m => m.inverse_branches(x))
    }

    fn lipschitz_bound(&self) -> f64 {
        delegate!(self, m => m.lipschitz_bound())
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        circle_distance(*a, *b)
    }

    fn degree(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        delegate!(self, m => m.name())
    }

    fn smooth_between(&self, a: &f64, b: &f64) -> bool {
        delegate!(self, m => m.smooth_between(a, b))
    }
}

/// A parsed zoo name: either a circle map or the two-matrix cocycle.
#[derive(Debug, Clone, PartialEq)]
pub enum ZooMap {
    Circle(CircleZoo),
    Cocycle(BmCocycle),
}

impl ZooMap {
    pub fn name(&self) -> String {
        match self {
            ZooMap::Circle(m) => m.name(),
            ZooMap::Cocycle(c) => c.name(),
        }
    }
}

impl fmt::Display for ZooMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for ZooMap {
    type Err = DynamicsError;

    /// Parses `doubling`, `perturbed_doubling(0.05)`, `neutral_fixed(0.5)`,
    /// `pl_tent(3,1.5)` or `bm_cocycle(2,2)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, args) = match s.find('(') {
            Some(open) => {
                let close = s
                    .strip_suffix(')')
                    .ok_or_else(|| DynamicsError::UnknownMap(s.to_string()))?;
                let args = close[open + 1..]
                    .split(',')
                    .map(|a| {
                        a.trim()
                            .parse::<f64>()
                            .map_err(|_| DynamicsError::UnknownMap(s.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                (&s[..open], args)
            }
            None => (s, Vec::new()),
        };
        let arity = |n: usize| -> Result<(), DynamicsError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(DynamicsError::UnknownMap(format!(
                    "{s}: expected {n} parameter(s)"
                )))
            }
        };
        match head.trim() {
            "doubling" => {
                arity(0)?;
                Ok(ZooMap::Circle(CircleZoo::Doubling(Doubling)))
            }
            "perturbed_doubling" => {
                arity(1)?;
                Ok(ZooMap::Circle(CircleZoo::PerturbedDoubling(
                    PerturbedDoubling::new(args[0])?,
                )))
            }
            "neutral_fixed" => {
                arity(1)?;
                Ok(ZooMap::Circle(CircleZoo::NeutralFixed(NeutralFixed::new(
                    args[0],
                )?)))
            }
            "pl_tent" => {
                arity(2)?;
                Ok(ZooMap::Circle(CircleZoo::PlTent(PlTent::new(args[0], args[1])?)))
            }
            "bm_cocycle" => {
                arity(2)?;
                Ok(ZooMap::Cocycle(BmCocycle::new(args[0], args[1])?))
            }
            _ => Err(DynamicsError::UnknownMap(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_branches<S: MapSystem<Point = f64>>(sys: &S, xs: &[f64]) {
        for &x in xs {
            let pre = sys.inverse_branches(&x);
            assert_eq!(pre.len(), sys.degree());
            for y in pre {
                let back = sys.eval(&y);
                assert!(circle_distance(back, x) < 1e-10, "{}: f({y}) = {back} ≠ {x}", sys.name());
            }
        }
    }

    #[test]
    fn doubling_branches_are_halves() {
        let b = Doubling.inverse_branches(&0.3);
        assert_eq!(b, vec![0.15, 0.65]);
    }

    #[test]
    fn all_zoo_inverse_branches_are_consistent() {
        let xs: Vec<f64> = (0..97).map(|k| k as f64 / 97.0 + 1e-3).collect();
        check_branches(&Doubling, &xs);
        check_branches(&PerturbedDoubling::new(0.05).unwrap(), &xs);
        check_branches(&PerturbedDoubling::new(-0.9).unwrap(), &xs);
        check_branches(&NeutralFixed::new(0.5).unwrap(), &xs);
        check_branches(&PlTent::new(3.0, 1.5).unwrap(), &xs);
    }

    #[test]
    fn pl_tent_breakpoint_and_period_two_orbit() {
        let m = PlTent::new(3.0, 1.5).unwrap();
        assert!((m.breakpoint() - 1.0 / 3.0).abs() < 1e-15);
        let p = 1.0 / 7.0;
        let q = m.eval(&p);
        assert!((q - 3.0 / 7.0).abs() < 1e-15);
        assert!(circle_distance(m.eval(&q), p) < 1e-15);
    }

    #[test]
    fn pl_tent_rejects_slopes_on_one_side_of_two() {
        assert!(PlTent::new(3.0, 2.5).is_err());
        assert!(PlTent::new(1.2, 1.5).is_err());
    }

    #[test]
    fn neutral_point_has_unit_derivative() {
        let m = NeutralFixed::new(0.5).unwrap();
        assert_eq!(m.deriv(&0.0), 1.0);
        assert_eq!(m.eval(&0.0), 0.0);
    }

    #[test]
    fn lipschitz_bounds_dominate_sampled_derivatives() {
        let maps: Vec<CircleZoo> = vec![
            CircleZoo::Doubling(Doubling),
            CircleZoo::PerturbedDoubling(PerturbedDoubling::new(0.3).unwrap()),
            CircleZoo::NeutralFixed(NeutralFixed::new(0.7).unwrap()),
            CircleZoo::PlTent(PlTent::new(3.0, 1.5).unwrap()),
        ];
        for m in maps {
            let k = m.lipschitz_bound();
            for i in 0..1000 {
                let d = m.deriv(&(i as f64 / 1000.0));
                assert!(d <= k && 1.0 / d <= k, "{}", m.name());
            }
        }
    }

    #[test]
    fn parses_zoo_names() {
        assert_eq!("doubling".parse::<ZooMap>().unwrap().name(), "doubling");
        assert_eq!(
            "perturbed_doubling(0.05)".parse::<ZooMap>().unwrap().name(),
            "perturbed_doubling(0.05)"
        );
        assert_eq!(
            " pl_tent(3, 1.5) ".parse::<ZooMap>().unwrap().name(),
            "pl_tent(3,1.5)"
        );
        assert!(matches!(
            "bm_cocycle(2,2)".parse::<ZooMap>().unwrap(),
            ZooMap::Cocycle(_)
        ));
        assert!("tripling".parse::<ZooMap>().is_err());
        assert!("pl_tent(3)".parse::<ZooMap>().is_err());
        assert!("neutral_fixed(-1)".parse::<ZooMap>().is_err());
    }
}
