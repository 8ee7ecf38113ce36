//! Distribution of generator counts over all actions `(0, a, b)` of order `d`.
//!
//! `cargo run --example scan -- 15`

use lefschetz::cyclic::{mu_upper_bound_3vars, scan_3vars};

fn main() -> lefschetz::Result<()> {
    let d: u32 = std::env::args().nth(1).map_or(15, |s| s.parse().expect("integer argument"));
    let scan = scan_3vars(d)?;
    for (mu, count) in &scan.histogram {
        println!("mu = {mu:>4}: {count}");
    }
    println!("gcd split: {:?}", scan.gcd_split());
    let b = mu_upper_bound_3vars(d)?;
    println!("bound {} (p = {}), max over gcd-one triples {}, attained {}", b.bound, b.p, b.max_mu, b.sharp);
    Ok(())
}
