//! Girth and circuit census of the surjectivity matroid.
//!
//! `cargo run --release --example matroid_census -- 3 5`

use lefschetz::matroid::SurMatroid;

fn main() -> lefschetz::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let (n, d) = match args[..] {
        [n, d] => (n as usize, d),
        _ => (3, 5),
    };
    let m = SurMatroid::new(n, d)?;
    let census = m.census(m.len())?;
    println!("n={n} d={d}: |ground|={} rank={} girth={}", census.ground_size, census.rank, census.girth);
    for (size, count) in census.histogram() {
        println!("  {count} circuits of size {size}");
    }
    let b = m.dim_bounds()?;
    if let Some(star) = b.dim_delta_star {
        println!(
            "dim Delta = {}, dim Delta* = {star} (formula {})",
            b.dim_delta,
            b.dim_delta_star_formula.unwrap_or(-1)
        );
    }
    if let Some(c) = census.circuits.first() {
        println!("smallest circuit form: {}", c.form);
    }
    Ok(())
}
