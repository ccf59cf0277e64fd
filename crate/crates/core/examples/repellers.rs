//! Periodic repellers found by sifting and closing a long orbit.
//!
//! `cargo run --release --example repellers`

use siftshadow::dynamics::Doubling;
use siftshadow::pipeline::{find_repellers_planned, RepellerOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = RepellerOptions {
        seed: 7,
        ..RepellerOptions::default()
    };
    let x = std::f64::consts::PI - 3.0;
    let report = find_repellers_planned(&Doubling, x, 10_000, (0.6, 0.5, 0.4), 0.5, 0.05, &opts)?;
    println!(
        "{} hyperbolic times, {} recurrence pairs",
        report.sift_count, report.candidate_pairs
    );
    for r in &report.repellers {
        println!(
            "period {:>5}  point {:.12}  indicator {:.4}  hausdorff {:.3e}",
            r.shadow.period.unwrap_or(0),
            r.shadow.point,
            r.indicator,
            r.hausdorff
        );
    }
    Ok(())
}
