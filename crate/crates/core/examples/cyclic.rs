//! Invariant ideal of a cyclic group action and its WLP witnesses.
//!
//! `cargo run --release --example cyclic -- 10 0 2 4`

use lefschetz::cyclic::CyclicAction;

fn main() -> lefschetz::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let (d, a) = match args.split_first() {
        Some((&d, a)) if !a.is_empty() => (d as u32, a.to_vec()),
        _ => (10, vec![0, 2, 4]),
    };
    let action = CyclicAction::new(d, &a)?;
    let r = action.report();
    println!("d={d} a={:?}: mu = {} (formula {:?})", r.a, r.mu, r.mu_formula);
    println!("H(d-1) = {}, H(d) = {}, kernel dimension {}", r.h_dminus1, r.h_d, r.kernel_dimension);
    println!("predicted WLP: {}, computed: {} (first failure {:?})", r.prediction, r.direct, r.first_failure);
    if let Some(w) = r.injectivity_witness {
        println!("injectivity witness: {} terms, verified {}", w.support_size, w.verified);
    }
    if let Some(w) = r.surjectivity_witness {
        println!("surjectivity witness ({}): {} terms, verified {}", w.kind, w.support_size, w.verified);
    }
    println!("canonical representative: {:?}", action.canonical().weights());
    Ok(())
}
