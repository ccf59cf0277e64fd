//! Co-norms and finite-horizon minimal Lyapunov exponents.
//!
//! `cargo run --example lyapunov`

use siftshadow::dynamics::{min_lyapunov_estimate, BmCocycle, LinearMap, PerturbedDoubling, ProductAccumulator, ShiftPoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bm = BmCocycle::new(2.0, 2.0)?;
    println!("co-norm of S0 = {:.12}", bm.s0().conorm()?);
    println!("co-norm of S1 = {:.12}", bm.s1().conorm()?);

    // long products stay finite because rescaling is by powers of two
    let mut acc = ProductAccumulator::new();
    for i in 0..10_000 {
        acc.push(&bm.matrix((i % 2) as u8))?;
    }
    println!("(1/n) log co-norm of (S1 S0)^5000 = {:.12}", acc.log_conorm_rate(10_000));

    let x = ShiftPoint::periodic(vec![0, 1])?;
    let est = min_lyapunov_estimate(&bm, &x, 2000)?;
    println!("cocycle over 01: {:.12} at horizon {}", est.value, est.horizon);

    let f = PerturbedDoubling::new(0.05)?;
    for h in [10, 100, 1000] {
        let est = min_lyapunov_estimate(&f, &0.3, h)?;
        println!("perturbed doubling from 0.3, horizon {h}: {:.6}", est.value);
    }
    Ok(())
}
