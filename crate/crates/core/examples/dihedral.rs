//! Invariants of the dihedral action and where the weak Lefschetz property fails.
//!
//! `cargo run --release --example dihedral`

use lefschetz::dihedral::dihedral_wlp_check;

fn main() -> lefschetz::Result<()> {
    let ds: Vec<u32> = match std::env::args().nth(1) {
        Some(s) => vec![s.parse().expect("integer argument")],
        None => (2..=6).collect(),
    };
    for d in ds {
        let r = dihedral_wlp_check(d)?;
        println!(
            "d={d} ({}): mu = {}, H({}) = {}, H({}) = {}, first failure {:?} by {:?}",
            r.parity,
            r.mu,
            2 * d - 1,
            r.h_low,
            2 * d,
            r.h_high,
            r.first_failure,
            r.wlp_failure_mode
        );
        if let Some(s) = &r.witnesses.s2 {
            println!("  alternating multiplicities {} -> {}", s.alternating_low, s.alternating_high);
        }
        if let Some(note) = &r.edge_case {
            println!("  {note}");
        }
    }
    Ok(())
}
