//! Exhaustive census of failing ideals and orbit classes of their kernel forms.
//!
//! `cargo run --release --example classify -- 4 3 6`

use lefschetz::classify::classify;

fn main() -> lefschetz::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let (n, d, extra) = match args[..] {
        [n, d, e] => (n as usize, d, e as usize),
        _ => (3, 5, 3),
    };
    let r = classify(n, d, extra)?;
    println!(
        "{} ideals, {} failing, {} distinct kernels ({} with dimension >= 2), {} orbit classes",
        r.ideal_count,
        r.failing_count,
        r.distinct_kernels,
        r.multi_dimensional_kernels,
        r.orbit_classes.len()
    );
    for (i, c) in r.orbit_classes.iter().enumerate() {
        println!(
            "{:>3}: |supp| = {:>2}, orbit {:>2}: {}",
            i + 1,
            c.representative.support_size(),
            c.orbit_size,
            c.representative
        );
    }
    Ok(())
}
