use crate::dynamics::circle_distance;

/// `sup_{a ∈ A} d(a, B)` on the circle.
pub fn directed_circle_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if b.is_empty() {
        return f64::INFINITY;
    }
    let mut sorted = b.to_vec();
    sorted.sort_by(f64::total_cmp);
    a.iter()
        .map(|&x| nearest(&sorted, x))
        .fold(0.0, f64::max)
}

fn nearest(sorted: &[f64], x: f64) -> f64 {
    let i = sorted.partition_point(|&y| y < x);
    let n = sorted.len();
    // neighbours on either side, wrapping around the circle
    let right = sorted[i % n];
    let left = sorted[(i + n - 1) % n];
    circle_distance(x, right).min(circle_distance(x, left))
}

/// Hausdorff distance between two finite subsets of the circle.
pub fn hausdorff_circle(a: &[f64], b: &[f64]) -> f64 {
    directed_circle_distance(a, b).max(directed_circle_distance(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &[f64], b: &[f64]) -> f64 {
        let d = |p: &[f64], q: &[f64]| {
            p.iter()
                .map(|x| q.iter().map(|y| circle_distance(*x, *y)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        d(a, b).max(d(b, a))
    }

    #[test]
    fn matches_brute_force() {
        let a: Vec<f64> = (0..37).map(|i| crate::sampling::halton(i, 2)).collect();
        let b: Vec<f64> = (0..11).map(|i| crate::sampling::halton(i + 5, 3)).collect();
        assert!((hausdorff_circle(&a, &b) - brute(&a, &b)).abs() < 1e-15);
    }

    #[test]
    fn wraps_around_zero() {
        assert!((hausdorff_circle(&[0.99], &[0.01]) - 0.02).abs() < 1e-15);
    }
}
