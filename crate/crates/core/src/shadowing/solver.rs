use super::chain::PseudoOrbitChain;
use super::lift::{lift_with_samples, Lift};
use super::{CircleMap, ShadowError, ShadowingConfig};
use crate::strings::{well_adapted, PositiveString};

/// Residual bound asserted at every solver termination.
pub const RESIDUAL_BOUND: f64 = 1e-10;
/// Lipschitz samples per lift when rescaling a chain.
const CHAIN_LIP_SAMPLES: u64 = 8;

/// A sequence of one-dimensional maps `Φ_j(u) = a_j u + φ_j(u)` from the
/// chart at index `j` to the chart at `j + 1`.
pub trait ChartSequence {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The linear part `a_j`.
    fn linear(&self, j: usize) -> f64;

    /// The remainder `φ_j(u)`.
    fn remainder(&self, j: usize, u: f64) -> f64;

    fn apply(&self, j: usize, u: f64) -> f64 {
        self.linear(j) * u + self.remainder(j, u)
    }
}

/// How the last displacement is closed off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// `v_T = v_0`.
    Cyclic,
    /// `v_T` fixed to the given value.
    Terminal(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    /// `v_0, …, v_{T−1}`.
    pub v: Vec<f64>,
    pub sweeps: usize,
    /// `max_j |Φ_j(v_j) − v_{j+1}|`.
    pub residual: f64,
    /// `max_j |v_j|`.
    pub norm: f64,
}

/// Solves `v_{j+1} = Φ_j(v_j)` for all `j`.
///
/// Each backward sweep replaces `v_j` by the solution of
/// `a_j u + φ_j(u) = v_{j+1}` (the inverse-graph transform), using Picard
/// iteration `u ← (v_{j+1} − φ_j(u))/a_j` and a bracketed bisection when
/// Picard stalls. Sweeps stop once no coordinate moves by `tol_fix`.
///
/// Requires `|a_j| ≥ 1/γ` and `|φ_j(0)| ≤ δ`; on return the residual is at
/// most `1e-10` and `‖v‖ ≤ δ/ς + 1e-12`, otherwise an error is returned.
pub fn solve_contraction<C: ChartSequence + ?Sized>(
    charts: &C,
    cfg: &ShadowingConfig,
    boundary: Boundary,
    initial: Option<&[f64]>,
) -> Result<FixedPoint, ShadowError> {
    let t = charts.len();
    if t == 0 {
        return Err(ShadowError::EmptyChain);
    }
    for j in 0..t {
        let a = charts.linear(j).abs();
        if a < 1.0 / cfg.gamma - 1e-12 {
            return Err(ShadowError::Precondition(format!(
                "|H_{j}| = {a} is below 1/gamma = {}",
                1.0 / cfg.gamma
            )));
        }
        let p0 = charts.remainder(j, 0.0).abs();
        if p0 > cfg.delta {
            return Err(ShadowError::Precondition(format!(
                "|phi_{j}(0)| = {p0:.3e} exceeds delta = {:.3e}",
                cfg.delta
            )));
        }
    }
    let mut v = match initial {
        Some(init) if init.len() == t => init.to_vec(),
        Some(init) => {
            return Err(ShadowError::Precondition(format!(
                "initial guess has length {}, expected {t}",
                init.len()
            )))
        }
        None => vec![0.0; t],
    };
    let terminal = |v: &[f64]| match boundary {
        Boundary::Cyclic => v[0],
        Boundary::Terminal(x) => x,
    };
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut change = 0.0_f64;
        let mut next = terminal(&v);
        for j in (0..t).rev() {
            let u = solve_step(charts, j, next, v[j]);
            change = change.max((u - v[j]).abs());
            v[j] = u;
            next = u;
        }
        if change < cfg.tol_fix {
            break;
        }
        if sweeps >= cfg.max_iter || !change.is_finite() {
            return Err(ShadowError::ContractionFailed {
                iterations: sweeps,
                last_change: change,
            });
        }
    }
    let end = terminal(&v);
    let residual = (0..t)
        .map(|j| {
            let target = if j + 1 < t { v[j + 1] } else { end };
            (charts.apply(j, v[j]) - target).abs()
        })
        .fold(0.0, f64::max);
    let norm = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if !(residual <= RESIDUAL_BOUND) {
        return Err(ShadowError::Postcondition(format!(
            "fixed-point residual {residual:.3e} exceeds {RESIDUAL_BOUND:e}"
        )));
    }
    if !(norm <= cfg.fixed_point_bound() + 1e-12) {
        return Err(ShadowError::Postcondition(format!(
            "fixed point norm {norm:.3e} exceeds delta/sigma = {:.3e}",
            cfg.fixed_point_bound()
        )));
    }
    Ok(FixedPoint {
        v,
        sweeps,
        residual,
        norm,
    })
}

/// Solves `a_j u + φ_j(u) = target` near `start`.
fn solve_step<C: ChartSequence + ?Sized>(charts: &C, j: usize, target: f64, start: f64) -> f64 {
    let a = charts.linear(j);
    let mut u = start;
    for _ in 0..100 {
        let next = (target - charts.remainder(j, u)) / a;
        if !next.is_finite() {
            break;
        }
        if (next - u).abs() <= 1e-18_f64.max(4.0 * f64::EPSILON * next.abs()) {
            return next;
        }
        u = next;
    }
    bisect_step(charts, j, target).unwrap_or(u)
}

/// Bisection on the monotone map `u ↦ Φ_j(u)`.
fn bisect_step<C: ChartSequence + ?Sized>(charts: &C, j: usize, target: f64) -> Option<f64> {
    let a = charts.linear(j);
    let sign = a.signum();
    let f = |u: f64| sign * (charts.apply(j, u) - target);
    let centre = (target - charts.remainder(j, 0.0)) / a;
    let mut w = centre.abs().max(1e-12);
    let (mut lo, mut hi) = (centre - w, centre + w);
    let mut tries = 0;
    while !(f(lo) <= 0.0 && f(hi) >= 0.0) {
        w *= 2.0;
        lo = centre - w;
        hi = centre + w;
        tries += 1;
        if tries > 60 || w > 0.25 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// A pseudo-orbit chain in rescaled charts, ready for the solver.
///
/// With the well-adapted weights `c_j` of each block and
/// `g_j = ∏_{k=N_i}^{j} c_k` (and `g = 1` just before a block starts),
/// `Φ̃_j(u) = Φ_j(g_{j−1} u)/g_j`, so `H̃_j = H_j/c_j` and
/// `φ̃_j(u) = φ_j(g_{j−1} u)/g_j`.
pub struct RescaledChain<'a, S> {
    sys: &'a S,
    /// Pseudo-orbit points `y_0, …, y_{T−1}` (plus `y_T` for open chains).
    pub ys: Vec<f64>,
    pub lifts: Vec<Lift>,
    pub c: Vec<f64>,
    pub g: Vec<f64>,
    pub g_prev: Vec<f64>,
    pub block_starts: Vec<usize>,
    pub cyclic: bool,
    /// Largest sampled `Lip(φ̃_j)` over the ball of radius `δ/ς`.
    pub lip_tilde_estimate: f64,
}

impl<S: CircleMap> ChartSequence for RescaledChain<'_, S> {
    fn len(&self) -> usize {
        self.lifts.len()
    }

    fn linear(&self, j: usize) -> f64 {
        self.lifts[j].h / self.c[j]
    }

    fn remainder(&self, j: usize, u: f64) -> f64 {
        self.lifts[j].phi(self.sys, self.g_prev[j] * u) / self.g[j]
    }

    fn apply(&self, j: usize, u: f64) -> f64 {
        self.lifts[j].apply(self.sys, self.g_prev[j] * u) / self.g[j]
    }
}

impl<S: CircleMap> RescaledChain<'_, S> {
    /// Chart displacements `v_j = g_{j−1} ṽ_j` in the original charts.
    pub fn unscale(&self, v_tilde: &[f64]) -> Vec<f64> {
        v_tilde.iter().zip(&self.g_prev).map(|(v, g)| v * g).collect()
    }

    /// Orbit points `z_j = y_j + v_j`.
    pub fn points(&self, v: &[f64]) -> Vec<f64> {
        self.ys
            .iter()
            .zip(v)
            .map(|(y, v)| crate::dynamics::wrap01(y + v))
            .collect()
    }
}

/// Builds the lifts along a chain and rescales each block by a well-adapted
/// string for its co-norms.
pub fn compose_and_rescale<'a, S: CircleMap>(
    sys: &'a S,
    chain: &PseudoOrbitChain,
    cfg: &ShadowingConfig,
) -> Result<RescaledChain<'a, S>, ShadowError> {
    if let Some((index, &gap)) = chain.gaps().iter().enumerate().find(|(_, g)| !(**g < cfg.delta)) {
        return Err(ShadowError::GapTooLarge {
            index,
            gap,
            limit: cfg.delta,
        });
    }
    if let Some(index) = chain.first_non_quasi_expanding(cfg.lambda) {
        return Err(ShadowError::NotQuasiExpanding {
            index,
            lambda: cfg.lambda,
        });
    }
    let ys = chain.concatenated();
    let t = chain.total_length();
    let lift_radius = cfg.fixed_point_bound();
    let lifts: Vec<Lift> = (0..t)
        .map(|j| {
            let next = if j + 1 < ys.len() { ys[j + 1] } else { ys[0] };
            lift_with_samples(sys, ys[j], next, lift_radius, CHAIN_LIP_SAMPLES)
        })
        .collect();
    let mut c = Vec::with_capacity(t);
    let mut g = Vec::with_capacity(t);
    let mut g_prev = Vec::with_capacity(t);
    let block_starts = chain.block_starts();
    for s in chain.strings() {
        let start = c.len();
        let b: Vec<f64> = lifts[start..start + s.len()].iter().map(|l| l.h.abs()).collect();
        let weights = well_adapted(&PositiveString::new(b, cfg.gamma)?)?;
        let mut acc = 1.0;
        for (k, &ck) in weights.values().iter().enumerate() {
            g_prev.push(acc);
            acc = if k + 1 == s.len() { 1.0 } else { acc * ck };
            c.push(ck);
            g.push(acc);
        }
    }
    let mut chain = RescaledChain {
        sys,
        ys,
        lifts,
        c,
        g,
        g_prev,
        block_starts,
        cyclic: chain.is_cyclic(),
        lip_tilde_estimate: 0.0,
    };
    for j in 0..t {
        let a = chain.linear(j).abs();
        if a < 1.0 / cfg.gamma - 1e-9 {
            return Err(ShadowError::Postcondition(format!(
                "rescaled |H_{j}| = {a} is below 1/gamma"
            )));
        }
    }
    chain.lip_tilde_estimate = (0..t)
        .map(|j| chain.lifts[j].lip_phi_bound * chain.g_prev[j] / chain.g[j])
        .fold(0.0, f64::max);
    Ok(chain)
}
