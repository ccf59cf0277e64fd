//! Builds a well-adapted string under a quasi-expanding one.
//!
//! `cargo run --example well_adapted`

use siftshadow::strings::{check_well_adapted, well_adapted, PositiveString};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (values, gamma) in [(vec![1.0, 4.0], 0.5), (vec![3.0, 0.5, 2.0, 2.5], 0.8)] {
        let b = PositiveString::new(values, gamma)?;
        let c = well_adapted(&b)?;
        println!("b = {:?}, gamma = {gamma}", b.values());
        println!("c = {:?}", c.values());
        println!("check: {:?}", check_well_adapted(&b, c.values(), 1e-10));
    }
    Ok(())
}
