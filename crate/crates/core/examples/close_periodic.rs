//! Closes pseudo-orbits of the doubling map into periodic orbits.
//!
//! `cargo run --example close_periodic`

use siftshadow::dynamics::{orbit_string, Doubling};
use siftshadow::shadowing::{close_periodic, PseudoOrbitChain, ShadowingConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ShadowingConfig::plan(&Doubling, 0.5, 0.05)?;
    println!("delta = {:.4e}, tau = {:.4}", cfg.delta, cfg.tau);

    // two strings near 9/31 and 5/31 glued into one cycle of length 5
    let d = cfg.delta / 20.0;
    let a = orbit_string(&Doubling, &(9.0 / 31.0 + d), 2)?;
    let b = orbit_string(&Doubling, &(5.0 / 31.0 - d), 3)?;
    let chain = PseudoOrbitChain::new(&Doubling, vec![a, b], true)?;
    let r = close_periodic(&Doubling, &chain, &cfg)?;
    println!(
        "period {:?}, point {:.15} (9/31 = {:.15}), shadow distance {:.3e}",
        r.period,
        r.point,
        9.0 / 31.0,
        r.shadow_distance
    );
    println!("smallest suffix average {:.6}", r.suffix_min_average);
    Ok(())
}
