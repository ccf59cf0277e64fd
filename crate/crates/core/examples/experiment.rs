//! Runs a command through the experiment layer and prints its report.
//!
//! `cargo run --example experiment`

use siftshadow::experiments::{run, Command, Params, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = Params {
        map: Some("bm_cocycle(2,2)".into()),
        ..Params::default()
    };
    let out = run(&RunConfig::new(Command::Kingman, params)?)?;
    println!("{}", out.summary);
    print!("{}", out.csv);
    println!("{}", out.json);
    Ok(())
}
