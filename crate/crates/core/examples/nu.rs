//! `nu(n, d)` as the girth of the surjectivity matroid, against the closed form.
//!
//! `cargo run --release --example nu -- 4 3`

use lefschetz::matroid::nu_report;

fn main() -> lefschetz::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let cases: Vec<(usize, u32)> = match args[..] {
        [n, d] => vec![(n as usize, d)],
        _ => vec![(3, 2), (3, 3), (3, 4), (4, 2), (4, 3), (5, 2)],
    };
    for (n, d) in cases {
        let r = nu_report(n, d)?;
        print!("nu({n},{d}) = {} (closed form {:?})", r.girth, r.expected);
        match (&r.witness, &r.edge_case) {
            (_, Some(note)) => println!("\n  {note}"),
            (Some(w), None) => println!("\n  witness: {}", w.form),
            (None, None) => println!(),
        }
    }
    Ok(())
}
