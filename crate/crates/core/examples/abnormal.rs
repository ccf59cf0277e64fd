//! Abnormal periodic points and a parameter scan of the matrix cocycle.
//!
//! `cargo run --release --example abnormal`

use siftshadow::dynamics::{MapSystem, PlTent};
use siftshadow::pipeline::{scan_bm_cocycle, search_abnormal, verify_abnormal_orbit, PeriodicOrbit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = PlTent::new(3.0, 1.5)?;
    let cycle = PeriodicOrbit::from_cycle(&f, vec![1.0 / 7.0, 3.0 / 7.0], 1e-12)?;
    let v = verify_abnormal_orbit(&f, &cycle, 0.3, 0.8)?;
    println!("{{1/7, 3/7}} on {}: {v:?}", f.name());

    let found = search_abnormal(&f, 1..=6, 200, 0.3, 0.65, 1)?;
    println!("{} abnormal cycles with period at most 6", found.len());
    for (orbit, v) in found.iter().take(5) {
        println!("  period {}: mean {:.4}, min suffix {:.4}", orbit.period(), v.mean, v.min_suffix);
    }

    for row in scan_bm_cocycle(&[1.0, 2.0], &[1.0, 2.0], 8, 16, 256, 3)? {
        println!(
            "alpha {} gamma {}: periodic min {:.4} on {:?}, finite min {:.4}",
            row.alpha, row.gamma, row.min_periodic_exponent, row.min_periodic_word, row.min_finite_rate
        );
    }
    Ok(())
}
