//! Shadows a noisy orbit segment by a true orbit over a finite window.
//!
//! `cargo run --example shadow_finite`

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use siftshadow::dynamics::{circle_distance, wrap01, MapSystem, OrbitString, PerturbedDoubling};
use siftshadow::shadowing::{shadow_finite, PseudoOrbitChain, ShadowingConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = PerturbedDoubling::new(0.05)?;
    let cfg = ShadowingConfig::plan(&f, 0.5, 0.05)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    // blocks of 10 true iterates, each restarted with a kick well below delta
    let mut x = 0.3;
    let mut strings = Vec::new();
    for _ in 0..12 {
        let mut pts = vec![x];
        for _ in 0..10 {
            let next = f.eval(pts.last().unwrap());
            pts.push(next);
        }
        x = wrap01(pts.last().unwrap() + rng.random_range(-1.0..1.0) * cfg.delta * 1e-3);
        strings.push(OrbitString::from_points(&f, pts, 1e-12)?);
    }
    let chain = PseudoOrbitChain::new(&f, strings, false)?;
    println!("largest kick {:.3e} against delta {:.3e}", chain.max_gap(), cfg.delta);

    let r = shadow_finite(&f, &chain, &cfg)?;
    println!("shadow point {:.15}", r.point);
    println!("shadow distance {:.3e} (epsilon {})", r.shadow_distance, cfg.epsilon);
    let start = chain.strings()[0].base();
    println!("moved from the first pseudo-point by {:.3e}", circle_distance(*start, r.point));
    Ok(())
}
