use std::fmt;

use serde::{Deserialize, Serialize};

use super::real::{mean_at_least, obstruction, suffixes_at_least, RealString};
use super::{StringError, STRING_TOL};

/// Pliss constants `c = (γ − γ′)/(H − γ′)` and `N = ⌈1/c⌉`.
pub fn pliss_constants(gamma: f64, gamma_prime: f64, bound: f64) -> Result<(f64, usize), StringError> {
    if !(gamma_prime > 0.0 && gamma_prime.is_finite()) {
        return Err(StringError::BadParameters(format!(
            "gamma_prime must be positive, got {gamma_prime}"
        )));
    }
    if !(gamma_prime < gamma) {
        return Err(StringError::BadParameters(format!(
            "need gamma_prime < gamma, got {gamma_prime} >= {gamma}"
        )));
    }
    if !(gamma <= bound) {
        return Err(StringError::BadParameters(format!(
            "gamma = {gamma} exceeds the bound H = {bound}"
        )));
    }
    let c = (gamma - gamma_prime) / (bound - gamma_prime);
    Ok((c, (1.0 / c).ceil() as usize))
}

/// Prefix lengths at which a γ-string is γ′-quasi-expanding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiftResult {
    /// `n₁ < ⋯ < n_k`, each in `1..=m`.
    pub indices: Vec<usize>,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub bound: f64,
    /// Pliss constant `c`.
    pub c: f64,
    /// Pliss threshold `N`.
    pub n_threshold: usize,
    /// Length of the sifted string.
    pub m: usize,
}

impl SiftResult {
    /// `k ≥ max(1, m·c)` whenever `m ≥ N`.
    pub fn satisfies_pliss_bound(&self) -> bool {
        let k = self.indices.len() as f64;
        self.m < self.n_threshold || (k >= 1.0 && k >= self.m as f64 * self.c - 1e-9)
    }
}

/// Every `n ∈ 1..=m` whose prefix `(a₀, …, a_{n−1})` is γ′-quasi-expanding.
///
/// Linear time: with `Bⱼ = Sⱼ − γ′ j` (prefix sums `Sⱼ`), `n` qualifies iff
/// `Bₙ ≥ max_{j<n} Bⱼ`.
pub fn pliss_sift(s: &RealString, gamma: f64, gamma_prime: f64) -> Result<SiftResult, StringError> {
    let (c, n_threshold) = pliss_constants(gamma, gamma_prime, s.bound())?;
    if !mean_at_least(s.values(), gamma) {
        return Err(StringError::NotGammaString { mean: s.mean(), gamma });
    }
    Ok(SiftResult {
        indices: sift_indices(s.values(), gamma_prime),
        gamma,
        gamma_prime,
        bound: s.bound(),
        c,
        n_threshold,
        m: s.len(),
    })
}

pub(crate) fn sift_indices(values: &[f64], gamma_prime: f64) -> Vec<usize> {
    let slope = gamma_prime - STRING_TOL;
    let mut indices = Vec::new();
    let mut sum = 0.0;
    let mut running_max = 0.0_f64;
    for (i, a) in values.iter().enumerate() {
        sum += a;
        let n = i + 1;
        let b = sum - slope * n as f64;
        if b >= running_max {
            indices.push(n);
        }
        running_max = running_max.max(b);
    }
    indices
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapLabel {
    /// `n_{i+1} − n_i ≤ N`.
    Short,
    /// The segment between the two indices is an `(N, γ̄₂)`-obstruction.
    Obstruction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledGap {
    pub start: usize,
    pub end: usize,
    pub label: GapLabel,
}

/// Labels the gaps between consecutive γ₃-sifted indices of a γ̄₂-string.
///
/// # Panics
///
/// If some gap is neither short nor an obstruction, which the Pliss
/// counting argument rules out.
pub fn classify_gaps(s: &RealString, gamma2bar: f64, gamma3: f64) -> Result<Vec<LabeledGap>, StringError> {
    let sift = pliss_sift(s, gamma2bar, gamma3)?;
    let n = sift.n_threshold;
    let gaps = sift
        .indices
        .windows(2)
        .map(|w| {
            let (start, end) = (w[0], w[1]);
            let label = if end - start <= n {
                GapLabel::Short
            } else {
                assert!(
                    obstruction(&s.values()[start..end], n, gamma2bar),
                    "gap [{start}, {end}) is neither short nor an obstruction"
                );
                GapLabel::Obstruction
            };
            LabeledGap { start, end, label }
        })
        .collect();
    Ok(gaps)
}

/// Which hypothesis of the bad-string extraction failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// `m ≥ N_{γ₀,γ₃}`.
    A,
    /// `m · c_{γ₀,γ₃} > ℓ`.
    B,
    /// `ℓ ≥ N_{γ₁,γ₂}`.
    C,
    /// `ℓ · c_{γ₁,γ₂} > n`.
    D,
    /// The whole string is a γ₀-string.
    GammaString,
    /// The prefix of length `ℓ` is an `(n, γ₂)`-obstruction.
    Obstruction,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::A => "a",
            Hypothesis::B => "b",
            Hypothesis::C => "c",
            Hypothesis::D => "d",
            Hypothesis::GammaString => "gamma0-string",
            Hypothesis::Obstruction => "obstruction prefix",
        })
    }
}

/// Finds the smallest `kk ∈ [ℓ, m)` whose prefix is γ₃-quasi-expanding but
/// not a γ₁-string.
///
/// Returns `Ok(None)` only if the search comes up empty despite all
/// hypotheses holding, which should not happen.
pub fn extract_bad_quasi_string(
    s: &RealString,
    gammas: (f64, f64, f64, f64),
    n: usize,
    ell: usize,
) -> Result<Option<usize>, StringError> {
    let (g0, g1, g2, g3) = gammas;
    if !(g0 > g1 && g1 > g2 && g2 > g3 && g3 > 0.0) {
        return Err(StringError::BadParameters(format!(
            "need gamma0 > gamma1 > gamma2 > gamma3 > 0, got {gammas:?}"
        )));
    }
    let m = s.len();
    if !(m > ell && ell > n && n > 0) {
        return Err(StringError::BadParameters(format!(
            "need m > ell > n > 0, got m = {m}, ell = {ell}, n = {n}"
        )));
    }
    let (c03, n03) = pliss_constants(g0, g3, s.bound())?;
    let (c12, n12) = pliss_constants(g1, g2, s.bound())?;
    let checks = [
        (m >= n03, Hypothesis::A),
        (m as f64 * c03 > ell as f64, Hypothesis::B),
        (ell >= n12, Hypothesis::C),
        (ell as f64 * c12 > n as f64, Hypothesis::D),
        (mean_at_least(s.values(), g0), Hypothesis::GammaString),
        (obstruction(&s.values()[..ell], n, g2), Hypothesis::Obstruction),
    ];
    if let Some((_, h)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(StringError::HypothesesNotMet(*h));
    }
    Ok((ell..m).find(|&kk| {
        let prefix = &s.values()[..kk];
        suffixes_at_least(prefix, g3) && !mean_at_least(prefix, g1)
    }))
}
