//! Weak Lefschetz check of an artinian monomial ideal, degree by degree.
//!
//! `cargo run --example wlp_check -- 3 x1^3 x2^3 x3^3 x1*x2*x3`

use lefschetz::ideal::MonomialIdeal;
use lefschetz::monomial::Monomial;

fn main() -> lefschetz::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(3, |s| s.parse().expect("number of variables"));
    let mut gens: Vec<Monomial> = args.map(|s| Monomial::parse(&s, n)).collect::<lefschetz::Result<_>>()?;
    if gens.is_empty() {
        gens = ["x1^3", "x2^3", "x3^3", "x1*x2*x3"]
            .iter()
            .map(|s| Monomial::parse(s, 3))
            .collect::<lefschetz::Result<_>>()?;
    }
    let d = gens[0].degree();
    let ideal = MonomialIdeal::new(n, d, gens)?;
    let report = ideal.wlp_check();
    println!("hilbert series: {:?}", ideal.hilbert_series());
    for r in &report.records {
        println!("  {} -> {}: {}x{} rank {} {:?}", r.j, r.j + 1, r.dim_target, r.dim_source, r.rank, r.failure_mode);
    }
    println!("WLP: {}", report.verdict);
    for f in ideal.dual_kernel_forms() {
        println!("kernel form: {}", f.normalized());
    }
    Ok(())
}
