//! Doubling-scale averages of the log co-norm, which never decrease.
//!
//! `cargo run --example kingman`

use siftshadow::dynamics::{kingman_doubling_average, BmCocycle, Doubling, ShiftPoint, Word};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let levels = kingman_doubling_average(&Doubling, &0.1234, 1, 8, 8)?;
    println!("doubling: {:?}", levels.iter().map(|e| e.value).collect::<Vec<_>>());

    let bm = BmCocycle::new(2.0, 2.0)?;
    let bits: Vec<u8> = (0..4096u32).map(|i| (i.count_ones() % 2) as u8).collect();
    let x = ShiftPoint::new(Word::new(bits, vec![0, 1])?, 0);
    println!("cocycle over the Thue-Morse word:");
    for e in kingman_doubling_average(&bm, &x, 1, 9, 8)? {
        println!("  horizon {:>4}: {:.6}", e.horizon, e.value);
    }
    Ok(())
}
