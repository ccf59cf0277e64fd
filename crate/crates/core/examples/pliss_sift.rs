//! Hyperbolic times of a string, and the gaps between them.
//!
//! `cargo run --example pliss_sift`

use siftshadow::strings::{classify_gaps, pliss_sift, RealString};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = RealString::new(vec![1.0, -1.0, 1.0, 1.0], 1.0)?;
    let r = pliss_sift(&s, 0.5, 0.25)?;
    println!("indices {:?}, c = {:.4}, N = {}", r.indices, r.c, r.n_threshold);
    println!("meets the Pliss bound: {}", r.satisfies_pliss_bound());

    // a longer string with a bad stretch in the middle
    let values: Vec<f64> = (0..60)
        .map(|i| if (20..30).contains(&i) { -0.8 } else { 0.9 })
        .collect();
    let s = RealString::new(values, 1.0)?;
    let r = pliss_sift(&s, 0.5, 0.25)?;
    println!("{} of {} times are hyperbolic", r.indices.len(), r.m);
    for g in classify_gaps(&s, 0.5, 0.25)?.iter().filter(|g| g.end - g.start > 1) {
        println!("  gap {}..{}: {:?}", g.start, g.end, g.label);
    }
    Ok(())
}
