use serde::{Deserialize, Serialize};

use super::{StringError, STRING_TOL};

/// `(a₀, …, a_{m−1})` with `|aᵢ| ≤ H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealString {
    values: Vec<f64>,
    bound: f64,
}

impl RealString {
    pub fn new(values: Vec<f64>, bound: f64) -> Result<Self, StringError> {
        if !(bound.is_finite() && bound > 0.0) {
            return Err(StringError::BadParameters(format!("bound H must be positive, got {bound}")));
        }
        if values.is_empty() {
            return Err(StringError::Empty);
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.abs() <= bound + STRING_TOL))
        {
            return Err(StringError::OutOfBound { index, value, bound });
        }
        Ok(Self { values, bound })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// The substring `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Result<RealString, StringError> {
        if start >= end || end > self.len() {
            return Err(StringError::BadParameters(format!(
                "slice [{start}, {end}) of a string of length {}",
                self.len()
            )));
        }
        Ok(Self {
            values: self.values[start..end].to_vec(),
            bound: self.bound,
        })
    }

    /// The prefix of length `n`.
    pub fn prefix(&self, n: usize) -> Result<RealString, StringError> {
        self.slice(0, n)
    }
}

/// Mean of `values` is at least `gamma` (closed inequality).
pub fn is_gamma_string(s: &RealString, gamma: f64) -> bool {
    mean_at_least(s.values(), gamma)
}

pub(crate) fn mean_at_least(values: &[f64], gamma: f64) -> bool {
    values.iter().sum::<f64>() / values.len() as f64 >= gamma - STRING_TOL
}

/// Every right-suffix average `(1/ℓ) Σ_{j=1..ℓ} a_{m−j}` is at least `lambda`.
pub fn is_quasi_expanding(s: &RealString, lambda: f64) -> bool {
    suffixes_at_least(s.values(), lambda)
}

/// [`is_quasi_expanding`] on a raw slice.
pub fn is_quasi_expanding_values(values: &[f64], lambda: f64) -> bool {
    suffixes_at_least(values, lambda)
}

pub(crate) fn suffixes_at_least(values: &[f64], lambda: f64) -> bool {
    let mut sum = 0.0;
    for (l, a) in values.iter().rev().enumerate() {
        sum += a;
        if sum / ((l + 1) as f64) < lambda - STRING_TOL {
            return false;
        }
    }
    true
}

/// `m ≥ n` and no prefix of length `ℓ ∈ [n, m]` is a `rho`-string.
pub fn is_obstruction(s: &RealString, n: usize, rho: f64) -> bool {
    obstruction(s.values(), n, rho)
}

pub(crate) fn obstruction(values: &[f64], n: usize, rho: f64) -> bool {
    if n == 0 || values.len() < n {
        return false;
    }
    let mut sum = 0.0;
    for (i, a) in values.iter().enumerate() {
        sum += a;
        let l = i + 1;
        if l >= n && sum / l as f64 >= rho - STRING_TOL {
            return false;
        }
    }
    true
}
