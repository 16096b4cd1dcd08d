//! Horseshoe search on a few interval maps, including one of type 2^∞.

use distchaos::interval::{entropy_lower_bound, find_horseshoe, IntervalMap1D};

fn main() -> distchaos::Result<()> {
    for spec in ["tent:2", "logistic:4", "logistic:3.83", "logistic:3.5699456718695445"] {
        let f: IntervalMap1D = spec.parse()?;
        match find_horseshoe(&f, 8, 1024)? {
            Some(h) => println!(
                "{spec:<28} k = {}, intervals {:?}, margin {:.2e}, entropy >= {:.4}",
                h.k,
                h.intervals,
                h.margin,
                entropy_lower_bound(&h)
            ),
            None => println!("{spec:<28} none up to k = 8"),
        }
    }
    Ok(())
}
