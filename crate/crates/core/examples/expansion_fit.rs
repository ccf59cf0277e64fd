//! Fits uniform-expansion constants `(C, λ)` on sampled points.
//!
//! `cargo run --example expansion_fit`

use siftshadow::dynamics::{NeutralFixed, PlTent};
use siftshadow::pipeline::estimate_expansion_constants;
use siftshadow::sampling::halton;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sample: Vec<f64> = (1..=64).map(|i| halton(i, 2)).collect();

    let tent = PlTent::new(3.0, 1.5)?;
    let fit = estimate_expansion_constants(&tent, &sample, 20)?;
    println!("pl_tent: C = {:.5}, lambda = {:.5}", fit.c, fit.lambda);

    let neutral = NeutralFixed::new(1.0)?;
    let fit = estimate_expansion_constants(&neutral, &sample, 20)?;
    println!("neutral_fixed: lambda = {}, {:?}", fit.lambda, fit.diagnostic);
    Ok(())
}
