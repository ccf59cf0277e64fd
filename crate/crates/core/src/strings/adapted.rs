use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::real::suffixes_at_least;
use super::StringError;

/// `(b₀, …, b_{ℓ−1})` with every `bᵢ > 0`, tagged with `γ ∈ (0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositiveString {
    values: Vec<f64>,
    gamma: f64,
}

impl PositiveString {
    pub fn new(values: Vec<f64>, gamma: f64) -> Result<Self, StringError> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(StringError::BadParameters(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        if values.is_empty() {
            return Err(StringError::Empty);
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(StringError::BadParameters(format!(
                "entry {index} = {value} is not a positive real"
            )));
        }
        Ok(Self { values, gamma })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn logs(&self) -> Vec<f64> {
        self.values.iter().map(|b| b.ln()).collect()
    }

    /// `∏_{i=1..k} b_{ℓ−i} ≥ γ^{−k}` for every `k`, checked in log space.
    pub fn is_quasi_expanding(&self) -> bool {
        suffixes_at_least(&self.logs(), -self.gamma.ln())
    }
}

/// A violated condition of the well-adapted definition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WellAdaptedViolation {
    #[error("lengths differ: {0} vs {1}")]
    Length(usize, usize),
    #[error("log of the total product is {0}, not 0")]
    TotalProduct(f64),
    #[error("log of the partial product through index {k} is {log} > 0")]
    PartialProduct { k: usize, log: f64 },
    #[error("b/c at index {0} is below 1/gamma")]
    Expansion(usize),
    #[error("c at index {0} lies outside [min(gamma b, 1), b]")]
    Bounds(usize),
}

/// Rechecks the four conditions on `c` against `b`, in log space with
/// absolute slack `tol`.
pub fn check_well_adapted(b: &PositiveString, c: &[f64], tol: f64) -> Result<(), WellAdaptedViolation> {
    if b.len() != c.len() {
        return Err(WellAdaptedViolation::Length(b.len(), c.len()));
    }
    let lg = b.gamma().ln();
    let mut partial = 0.0;
    for (i, (&bi, &ci)) in b.values().iter().zip(c).enumerate() {
        let (lb, lc) = (bi.ln(), ci.ln());
        partial += lc;
        if i + 1 < c.len() && partial > tol {
            return Err(WellAdaptedViolation::PartialProduct { k: i, log: partial });
        }
        if lb - lc < -lg - tol {
            return Err(WellAdaptedViolation::Expansion(i));
        }
        if lc < (lg + lb).min(0.0) - tol || lc > lb + tol {
            return Err(WellAdaptedViolation::Bounds(i));
        }
    }
    if partial.abs() > tol {
        return Err(WellAdaptedViolation::TotalProduct(partial));
    }
    Ok(())
}

/// A well-adapted string `c` for a γ-quasi-expanding `b`.
///
/// Works forward in log space with `βᵢ = log(γ bᵢ)`, keeping a "debt"
/// equal to minus the running log-product. Contracting steps take
/// `cᵢ = γ bᵢ` and add to the debt; expanding steps repay as much of it as
/// `γ bᵢ` allows. Quasi-expansion (all suffix sums of β nonnegative) is
/// exactly what clears the debt by the end, so `∏ cᵢ = 1`.
pub fn well_adapted(b: &PositiveString) -> Result<PositiveString, StringError> {
    let lg = b.gamma().ln();
    let betas: Vec<f64> = b.values().iter().map(|v| v.ln() + lg).collect();
    if let Some(k) = first_failing_suffix(&betas) {
        return Err(StringError::NotQuasiExpanding { gamma: b.gamma(), k });
    }
    let mut debt = 0.0_f64;
    let mut logs = Vec::with_capacity(betas.len());
    for &beta in &betas {
        let x = if beta <= 0.0 {
            debt -= beta;
            beta
        } else {
            let x = beta.min(debt);
            debt -= x;
            x
        };
        logs.push(x);
    }
    PositiveString::new(logs.iter().map(|x| x.exp()).collect(), b.gamma())
}

fn first_failing_suffix(betas: &[f64]) -> Option<usize> {
    let mut sum = 0.0;
    for (l, beta) in betas.iter().rev().enumerate() {
        sum += beta;
        if sum / ((l + 1) as f64) < -super::STRING_TOL {
            return Some(l + 1);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expanding_string_gets_unit_weights() {
        let b = PositiveString::new(vec![2.5, 3.0, 2.0], 0.5).unwrap();
        let c = well_adapted(&b).unwrap();
        assert_eq!(c.values(), &[1.0, 1.0, 1.0]);
        check_well_adapted(&b, c.values(), 1e-10).unwrap();
    }

    #[test]
    fn one_four_example() {
        let b = PositiveString::new(vec![1.0, 4.0], 0.5).unwrap();
        assert!(b.is_quasi_expanding());
        let c = well_adapted(&b).unwrap();
        assert!((c.values()[0] - 0.5).abs() < 1e-15);
        assert!((c.values()[1] - 2.0).abs() < 1e-15);
        check_well_adapted(&b, c.values(), 1e-10).unwrap();
    }

    #[test]
    fn single_entry_gives_unit() {
        let b = PositiveString::new(vec![3.0], 0.5).unwrap();
        assert_eq!(well_adapted(&b).unwrap().values(), &[1.0]);
    }

    #[test]
    fn rejects_non_quasi_expanding() {
        let b = PositiveString::new(vec![4.0, 1.0], 0.5).unwrap();
        assert!(matches!(
            well_adapted(&b),
            Err(StringError::NotQuasiExpanding { k: 1, .. })
        ));
    }

    #[test]
    fn checker_flags_each_condition() {
        let b = PositiveString::new(vec![1.0, 4.0], 0.5).unwrap();
        assert!(matches!(
            check_well_adapted(&b, &[1.0, 1.0], 1e-10),
            Err(WellAdaptedViolation::Expansion(0))
        ));
        assert!(matches!(
            check_well_adapted(&b, &[0.5, 1.0], 1e-10),
            Err(WellAdaptedViolation::TotalProduct(_))
        ));
        assert!(matches!(
            check_well_adapted(&b, &[2.0, 0.5], 1e-10),
            Err(WellAdaptedViolation::PartialProduct { k: 0, .. })
        ));
    }
}
