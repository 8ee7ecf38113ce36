//! Maximal minors of the banded binomial matrices `T_{k,m}`.
//!
//! `cargo run --example toeplitz -- 12`

use lefschetz::linalg::{all_maximal_minors_nonzero, toeplitz};

fn main() -> lefschetz::Result<()> {
    let top: u32 = std::env::args().nth(1).map_or(8, |s| s.parse().expect("integer argument"));
    let t = toeplitz(2, 4)?;
    for i in 0..t.rows() {
        println!("{:?}", t.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }
    for m in 0..=top {
        let (mut checked, mut vanishing) = (0, Vec::new());
        for k in 0..=m {
            let c = all_maximal_minors_nonzero(&toeplitz(k, m)?)?;
            checked += c.minors_checked;
            if let Some(cols) = c.witness {
                vanishing.push((k, cols));
            }
        }
        println!("m={m:>2}: {checked} maximal minors, vanishing: {vanishing:?}");
    }
    Ok(())
}
