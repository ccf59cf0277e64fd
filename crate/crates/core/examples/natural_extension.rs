//! Backward branches, the extension metric, and `(t, γ)` witnesses.
//!
//! `cargo run --example natural_extension`

use siftshadow::dynamics::PlTent;
use siftshadow::extension::{check_t_gamma_set, enumerate_branches, extension_metric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = PlTent::new(3.0, 1.5)?;
    let branches = enumerate_branches(&f, &0.4, 8)?;
    println!("{} backward branches of depth 8 through 0.4", branches.len());

    let d = extension_metric(&f, &branches[0], &branches[1]);
    println!(
        "distance between the first two: {:.6} (depth {}, tail below {:.1e})",
        d.value, d.depth, d.truncation_bound
    );

    for gamma in [0.5, 0.7, 0.9] {
        let verdicts = check_t_gamma_set(&f, &branches, 3, gamma, 5)?;
        let ok = verdicts.iter().filter(|v| v.witness.is_some()).count();
        println!("gamma {gamma}: {ok} of {} branches have a witness", verdicts.len());
    }
    Ok(())
}
