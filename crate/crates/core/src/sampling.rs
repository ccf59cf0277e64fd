//! Deterministic low-discrepancy samples.

/// Radical inverse of `index` in `base` (the Halton/van der Corput sequence).
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let inv = 1.0 / base as f64;
    while index > 0 {
        f *= inv;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}
