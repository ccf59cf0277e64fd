//! The two-matrix cocycle `S₀ = α[[1,−1],[0,1]]`, `S₁ = γ[[1,0],[−1,1]]`
//! driven by the one-sided full shift on two symbols.
//!
//! A point of the shift is a driving word together with a read position.
//! Words are eventually periodic (`prefix` followed by `cycle` repeated),
//! which covers both periodic sequences and long random samples.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::linear::{LinearMap, Mat2};
use super::system::{Domain, MapSystem};
use super::DynamicsError;

/// Number of leading symbols compared by the shift metric.
const METRIC_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    prefix: Vec<u8>,
    cycle: Vec<u8>,
}

impl Word {
    pub fn new(prefix: Vec<u8>, cycle: Vec<u8>) -> Result<Self, DynamicsError> {
        if cycle.is_empty() {
            return Err(DynamicsError::BadParameter(
                "driving word needs a nonempty periodic tail".into(),
            ));
        }
        if prefix.iter().chain(&cycle).any(|&s| s > 1) {
            return Err(DynamicsError::BadParameter(
                "driving word symbols must be 0 or 1".into(),
            ));
        }
        Ok(Self { prefix, cycle })
    }

    pub fn periodic(cycle: Vec<u8>) -> Result<Self, DynamicsError> {
        Self::new(Vec::new(), cycle)
    }

    pub fn symbol(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The word read from position `pos` onward.
    fn tail_from(&self, pos: usize) -> Word {
        if pos < self.prefix.len() {
            Word {
                prefix: self.prefix[pos..].to_vec(),
                cycle: self.cycle.clone(),
            }
        } else {
            let shift = (pos - self.prefix.len()) % self.cycle.len();
            let mut cycle = self.cycle[shift..].to_vec();
            cycle.extend_from_slice(&self.cycle[..shift]);
            Word {
                prefix: Vec::new(),
                cycle,
            }
        }
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }
}

/// `(word, position)`: the sequence `word[pos], word[pos+1], …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftPoint {
    word: Arc<Word>,
    pos: usize,
}

impl ShiftPoint {
    pub fn new(word: Word, pos: usize) -> Self {
        Self {
            word: Arc::new(word),
            pos,
        }
    }

    pub fn periodic(cycle: Vec<u8>) -> Result<Self, DynamicsError> {
        Ok(Self::new(Word::periodic(cycle)?, 0))
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    /// `i`-th symbol of the sequence this point represents.
    pub fn symbol(&self, i: usize) -> u8 {
        self.word.symbol(self.pos + i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BmCocycle {
    alpha: f64,
    gamma: f64,
}

impl BmCocycle {
    pub fn new(alpha: f64, gamma: f64) -> Result<Self, DynamicsError> {
        if !(alpha.is_finite() && gamma.is_finite() && alpha > 0.0 && gamma > 0.0) {
            return Err(DynamicsError::BadParameter(format!(
                "bm_cocycle needs positive scalings, got ({alpha}, {gamma})"
            )));
        }
        Ok(Self { alpha, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn s0(&self) -> Mat2 {
        Mat2::new(self.alpha, -self.alpha, 0.0, self.alpha)
    }

    pub fn s1(&self) -> Mat2 {
        Mat2::new(self.gamma, 0.0, -self.gamma, self.gamma)
    }

    pub fn matrix(&self, symbol: u8) -> Mat2 {
        if symbol == 0 {
            self.s0()
        } else {
            self.s1()
        }
    }
}

impl MapSystem for BmCocycle {
    type Point = ShiftPoint;
    type Jacobian = Mat2;

    fn domain(&self) -> Domain {
        Domain::FullShift { symbols: 2 }
    }

    fn eval(&self, x: &ShiftPoint) -> ShiftPoint {
        ShiftPoint {
            word: Arc::clone(&x.word),
            pos: x.pos + 1,
        }
    }

    fn deriv(&self, x: &ShiftPoint) -> Mat2 {
        self.matrix(x.symbol(0))
    }

    fn inverse_branches(&self, x: &ShiftPoint) -> Vec<ShiftPoint> {
        let tail = x.word.tail_from(x.pos);
        (0..2u8)
            .map(|s| {
                let mut prefix = Vec::with_capacity(tail.prefix.len() + 1);
                prefix.push(s);
                prefix.extend_from_slice(&tail.prefix);
                ShiftPoint::new(
                    Word {
                        prefix,
                        cycle: tail.cycle.clone(),
                    },
                    0,
                )
            })
            .collect()
    }

    fn lipschitz_bound(&self) -> f64 {
        [self.s0(), self.s1()]
            .iter()
            .flat_map(|m| {
                let inv = m.inverse().map(|i| i.op_norm()).unwrap_or(f64::INFINITY);
                [m.op_norm(), inv]
            })
            .fold(0.0, f64::max)
    }

    /// `2^{−k}` where `k` is the first disagreeing symbol (checked to depth 64).
    fn distance(&self, a: &ShiftPoint, b: &ShiftPoint) -> f64 {
        (0..METRIC_DEPTH)
            .find(|&i| a.symbol(i) != b.symbol(i))
            .map_or(0.0, |k| 0.5f64.powi(k as i32))
    }

    fn degree(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        format!("bm_cocycle({},{})", self.alpha, self.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_match_definition() {
        let c = BmCocycle::new(2.0, 3.0).unwrap();
        assert_eq!(c.s0(), Mat2::new(2.0, -2.0, 0.0, 2.0));
        assert_eq!(c.s1(), Mat2::new(3.0, 0.0, -3.0, 3.0));
    }

    #[test]
    fn shift_preimages_map_back() {
        let c = BmCocycle::new(2.0, 2.0).unwrap();
        let w = Word::new(vec![1, 1, 0], vec![0, 1]).unwrap();
        for pos in 0..7 {
            let x = ShiftPoint::new(w.clone(), pos);
            for y in c.inverse_branches(&x) {
                assert_eq!(c.distance(&c.eval(&y), &x), 0.0);
            }
        }
    }

    #[test]
    fn shift_metric_uses_first_disagreement() {
        let c = BmCocycle::new(2.0, 2.0).unwrap();
        let a = ShiftPoint::periodic(vec![0, 1]).unwrap();
        let b = ShiftPoint::new(Word::new(vec![0, 0], vec![0, 1]).unwrap(), 0);
        assert_eq!(c.distance(&a, &b), 0.5);
        assert_eq!(c.distance(&a, &a), 0.0);
    }

    #[test]
    fn lipschitz_bound_covers_inverse() {
        let c = BmCocycle::new(2.0, 2.0).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((c.lipschitz_bound() - 2.0 * phi).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_binary_words() {
        assert!(Word::new(vec![2], vec![0]).is_err());
        assert!(Word::new(vec![0], vec![]).is_err());
    }
}
