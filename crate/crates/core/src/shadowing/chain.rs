use super::{CircleMap, ShadowError};
use crate::dynamics::OrbitString;
use crate::strings::is_quasi_expanding_values;

/// Orbit strings `(x_i, f^{n_i}(x_i))` glued into a pseudo-orbit, with
/// `gaps[i] = d(f^{n_i}(x_i), x_{i+1})`. When `cyclic`, the last string is
/// followed by the first.
#[derive(Debug, Clone)]
pub struct PseudoOrbitChain {
    strings: Vec<OrbitString<f64>>,
    gaps: Vec<f64>,
    cyclic: bool,
}

impl PseudoOrbitChain {
    pub fn new<S: CircleMap>(
        sys: &S,
        strings: Vec<OrbitString<f64>>,
        cyclic: bool,
    ) -> Result<Self, ShadowError> {
        if strings.is_empty() {
            return Err(ShadowError::EmptyChain);
        }
        let k = strings.len();
        let links = if cyclic { k } else { k - 1 };
        let gaps = (0..links)
            .map(|i| sys.distance(strings[i].end(), strings[(i + 1) % k].base()))
            .collect();
        Ok(Self {
            strings,
            gaps,
            cyclic,
        })
    }

    /// A single string closed up on itself.
    pub fn cyclic_single<S: CircleMap>(sys: &S, s: OrbitString<f64>) -> Result<Self, ShadowError> {
        Self::new(sys, vec![s], true)
    }

    pub fn strings(&self) -> &[OrbitString<f64>] {
        &self.strings
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().fold(0.0, |m, g| m.max(*g))
    }

    /// `Σ n_i`.
    pub fn total_length(&self) -> usize {
        self.strings.iter().map(|s| s.len()).sum()
    }

    /// Index of the first string that is not `lambda`-quasi-expanding.
    pub fn first_non_quasi_expanding(&self, lambda: f64) -> Option<usize> {
        self.strings
            .iter()
            .position(|s| !is_quasi_expanding_values(s.increments(), lambda))
    }

    /// The concatenated pseudo-orbit `(y_j)`: each string contributes its
    /// first `n_i` points; a non-cyclic chain also keeps the final end point.
    pub fn concatenated(&self) -> Vec<f64> {
        let mut ys: Vec<f64> = self
            .strings
            .iter()
            .flat_map(|s| s.points()[..s.len()].iter().copied())
            .collect();
        if !self.cyclic {
            ys.push(*self.strings.last().expect("nonempty").end());
        }
        ys
    }

    /// Start index in the concatenation of each string.
    pub fn block_starts(&self) -> Vec<usize> {
        self.strings
            .iter()
            .scan(0, |acc, s| {
                let start = *acc;
                *acc += s.len();
                Some(start)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{orbit_string, Doubling};

    #[test]
    fn gaps_and_concatenation() {
        let a = orbit_string(&Doubling, &(1.0 / 7.0 + 1e-3), 3).unwrap();
        let chain = PseudoOrbitChain::cyclic_single(&Doubling, a).unwrap();
        assert_eq!(chain.total_length(), 3);
        assert!((chain.gaps()[0] - 0.007).abs() < 1e-12);
        assert_eq!(chain.concatenated().len(), 3);
        assert_eq!(chain.first_non_quasi_expanding(0.5), None);
    }

    #[test]
    fn open_chain_keeps_end_point() {
        let a = orbit_string(&Doubling, &0.1, 2).unwrap();
        let b = orbit_string(&Doubling, &0.4, 3).unwrap();
        let chain = PseudoOrbitChain::new(&Doubling, vec![a, b], false).unwrap();
        assert_eq!(chain.gaps().len(), 1);
        assert_eq!(chain.concatenated().len(), 6);
        assert_eq!(chain.block_starts(), vec![0, 2]);
    }
}
