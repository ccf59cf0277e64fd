//! Linear maps acting on tangent spaces, co-norms, and overflow-safe products.
//!
//! Circle maps carry a scalar derivative (`f64`), matrix cocycles a 2×2
//! matrix ([`Mat2`]). Both implement [`LinearMap`], which is all the
//! estimators need.
//!
//! For an invertible `A` the co-norm (minimum norm) is
//! `min_{|v|=1} |Av| = 1/‖A⁻¹‖`. In dimension two it equals
//! `|det A| / ‖A‖`, and that identity is what keeps long products stable:
//! [`ProductAccumulator`] tracks `log |det|` additively and only needs the
//! operator norm of a renormalized running product.

use serde::{Deserialize, Serialize};

use super::DynamicsError;

/// Entries above this (or below its reciprocal) trigger renormalization.
const RESCALE_ABOVE: f64 = 1.0e64;
const RESCALE_BELOW: f64 = 1.0e-64;

/// A linear isomorphism between tangent spaces of dimension 1 or 2.
pub trait LinearMap: Clone + std::fmt::Debug + Send + Sync + 'static {
    /// Tangent dimension (1 or 2).
    const DIM: usize;

    fn identity() -> Self;

    /// The composition `next ∘ self` (apply `self` first).
    fn then(&self, next: &Self) -> Self;

    /// Operator norm induced by the Euclidean norm.
    fn op_norm(&self) -> f64;

    fn abs_det(&self) -> f64;

    fn max_abs_entry(&self) -> f64;

    fn scaled(&self, s: f64) -> Self;

    /// Co-norm `min_{|v|=1} |Av|`.
    fn conorm(&self) -> Result<f64, DynamicsError> {
        let det = self.abs_det();
        if !(det.is_finite() && det > 0.0) {
            return Err(DynamicsError::SingularMatrix);
        }
        if Self::DIM == 1 {
            return Ok(det);
        }
        let norm = self.op_norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(DynamicsError::SingularMatrix);
        }
        Ok(det / norm)
    }
}

impl LinearMap for f64 {
    const DIM: usize = 1;

    fn identity() -> Self {
        1.0
    }

    fn then(&self, next: &Self) -> Self {
        next * self
    }

    fn op_norm(&self) -> f64 {
        self.abs()
    }

    fn abs_det(&self) -> f64 {
        self.abs()
    }

    fn max_abs_entry(&self) -> f64 {
        self.abs()
    }

    fn scaled(&self, s: f64) -> Self {
        self * s
    }
}

/// Row-major 2×2 real matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Self::new(a, 0.0, 0.0, d)
    }

    pub fn det(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }

    pub fn transpose(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(a, c, b, d)
    }

    pub fn inverse(&self) -> Result<Mat2, DynamicsError> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return Err(DynamicsError::SingularMatrix);
        }
        let [[a, b], [c, d]] = self.0;
        Ok(Mat2::new(d / det, -b / det, -c / det, a / det))
    }
}

impl LinearMap for Mat2 {
    const DIM: usize = 2;

    fn identity() -> Self {
        Mat2::diag(1.0, 1.0)
    }

    fn then(&self, next: &Self) -> Self {
        next.mul(self)
    }

    fn op_norm(&self) -> f64 {
        // σ_max = (s₁ + s₂)/2 with s₁ = |(a+d, c−b)|, s₂ = |(a−d, b+c)|.
        let [[a, b], [c, d]] = self.0;
        let s1 = (a + d).hypot(c - b);
        let s2 = (a - d).hypot(b + c);
        0.5 * (s1 + s2)
    }

    fn abs_det(&self) -> f64 {
        self.det().abs()
    }

    fn max_abs_entry(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    fn scaled(&self, s: f64) -> Self {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(a * s, b * s, c * s, d * s)
    }
}

/// Co-norm of a single linear map.
pub fn conorm<L: LinearMap>(m: &L) -> Result<f64, DynamicsError> {
    m.conorm()
}

/// Splits a positive finite `x` as `m · 2^e` with `m ∈ [1, 2)`.
fn split_pow2(x: f64) -> (f64, i64) {
    const TWO_64: f64 = 18_446_744_073_709_551_616.0;
    let (x, bias) = if x < f64::MIN_POSITIVE { (x * TWO_64, -64) } else { (x, 0) };
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1023 << 52));
    (m, e + bias)
}

/// Running product `A_{n-1} ⋯ A_1 A_0` kept in renormalized form.
///
/// The true product equals `2^scale_exp · matrix`. Rescaling uses powers of
/// two only, so it is exact; `|det|` of the product is kept the same way.
/// For a constant scalar derivative `2` this makes `log_conorm / n` equal
/// `log 2` up to one rounding.
#[derive(Debug, Clone)]
pub struct ProductAccumulator<L: LinearMap> {
    matrix: L,
    scale_exp: i64,
    det_mant: f64,
    det_exp: i64,
    steps: usize,
}

impl<L: LinearMap> Default for ProductAccumulator<L> {
    fn default() -> Self {
        Self::new()
    }
}

impl<L: LinearMap> ProductAccumulator<L> {
    pub fn new() -> Self {
        Self {
            matrix: L::identity(),
            scale_exp: 0,
            det_mant: 1.0,
            det_exp: 0,
            steps: 0,
        }
    }

    /// Left-multiplies the running product by `step`.
    pub fn push(&mut self, step: &L) -> Result<(), DynamicsError> {
        let det = step.abs_det();
        if !(det.is_finite() && det > 0.0) {
            return Err(DynamicsError::SingularMatrix);
        }
        let (m, e) = split_pow2(self.det_mant * det);
        self.det_mant = m;
        self.det_exp += e;
        self.matrix = self.matrix.then(step);
        let big = self.matrix.max_abs_entry();
        if !(big.is_finite() && big > 0.0) {
            return Err(DynamicsError::SingularMatrix);
        }
        if !(RESCALE_BELOW..=RESCALE_ABOVE).contains(&big) {
            let (_, e) = split_pow2(big);
            self.matrix = self.matrix.scaled(2f64.powi(-e as i32));
            self.scale_exp += e;
        }
        self.steps += 1;
        Ok(())
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `log |det P|`.
    pub fn log_abs_det(&self) -> f64 {
        self.det_mant.ln() + self.det_exp as f64 * std::f64::consts::LN_2
    }

    /// `log ‖P‖` of the true product.
    pub fn log_norm(&self) -> f64 {
        let (m, e) = split_pow2(self.matrix.op_norm());
        m.ln() + (e + self.scale_exp) as f64 * std::f64::consts::LN_2
    }

    /// `‖P‖_co = m · 2^e` with `m ∈ [1, 2)`.
    fn conorm_parts(&self) -> (f64, i64) {
        if L::DIM == 1 {
            (self.det_mant, self.det_exp)
        } else {
            // σ_min σ_max = |det| in dimension two.
            let (m, e) = split_pow2(self.det_mant / self.matrix.op_norm());
            (m, e + self.det_exp - self.scale_exp)
        }
    }

    /// `log ‖P‖_co` of the true product.
    pub fn log_conorm(&self) -> f64 {
        let (m, e) = self.conorm_parts();
        m.ln() + e as f64 * std::f64::consts::LN_2
    }

    /// `(1/n) log ‖P‖_co`. The exponent is divided before multiplying by
    /// `log 2`, so a product `2ⁿ` gives exactly `log 2`.
    pub fn log_conorm_rate(&self, n: usize) -> f64 {
        let (m, e) = self.conorm_parts();
        let n = n as f64;
        m.ln() / n + (e as f64 / n) * std::f64::consts::LN_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_conorm() {
        assert_eq!(Mat2::identity().conorm().unwrap(), 1.0);
    }

    #[test]
    fn diagonal_conorm_is_smallest_entry() {
        let c = Mat2::diag(3.0, 0.5).conorm().unwrap();
        assert!((c - 0.5).abs() < 1e-15);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = Mat2::new(1.0, 2.0, 2.0, 4.0);
        assert!(matches!(m.conorm(), Err(DynamicsError::SingularMatrix)));
        assert!(matches!(0.0_f64.conorm(), Err(DynamicsError::SingularMatrix)));
    }

    #[test]
    fn scalar_conorm_is_absolute_value() {
        assert_eq!((-2.5_f64).conorm().unwrap(), 2.5);
    }

    #[test]
    fn pow2_split_roundtrips() {
        for x in [1.0, 3.5, 1e-300, 5e-320, 1e300, 0.75] {
            let (m, e) = split_pow2(x);
            assert!((1.0..2.0).contains(&m), "{x}");
            assert_eq!(m * 2f64.powi(e as i32), x);
        }
    }

    #[test]
    fn doubling_products_give_log_two() {
        let mut acc = ProductAccumulator::<f64>::new();
        for n in 1..=3000 {
            acc.push(&2.0).unwrap();
            assert!((acc.log_conorm() / n as f64 - std::f64::consts::LN_2).abs() < 1e-15);
            assert_eq!(acc.log_conorm_rate(n), std::f64::consts::LN_2);
        }
    }

    #[test]
    fn accumulator_survives_long_products() {
        let m = Mat2::new(2.0, -2.0, 0.0, 2.0);
        let mut acc = ProductAccumulator::new();
        for _ in 0..5000 {
            acc.push(&m).unwrap();
        }
        let v = acc.log_conorm() / 5000.0;
        assert!(v.is_finite());
        // 2·[[1,−1],[0,1]]ⁿ = 2ⁿ [[1, −n],[0, 1]], co-norm ≈ 2ⁿ/n.
        let expected = 2f64.ln() - (5000f64).ln() / 5000.0;
        assert!((v - expected).abs() < 1e-6, "{v} vs {expected}");
    }
}
