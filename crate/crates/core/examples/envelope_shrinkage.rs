//! Propagates a product envelope through the triangular map and reports where
//! fibers shrink and where the envelope returns.

use distchaos::interval::IntervalMap1D;
use distchaos::kolyada::*;

fn main() -> distchaos::Result<()> {
    let system = feigenbaum_intervals(FEIGENBAUM_LAMBDA, MAX_LEVEL, 4096, 256)?;
    let heights = build_height_field(&system, &NSequence::default(), 8)?;
    let kset = KSet::new(FEIGENBAUM_LAMBDA, &heights.zero_anchors, K_ORBIT_LEN);
    let spec = TriangularMapSpec::new(IntervalMap1D::logistic(FEIGENBAUM_LAMBDA)?, heights);
    for m in [2, 3] {
        let r = envelope_shrinkage_test(&spec, &system, &kset, m, 1, 0.5f64.powi(m as i32), 1 << (m + 6))?;
        println!(
            "m = {m}: {} ({}/{} windows with a shrinking fiber), return iterate {:?}",
            r.verdict, r.windows_with_witness, r.windows, r.return_iterate
        );
        if let Some(w) = r.shrink_witnesses.first() {
            println!("  first witness: x = {:.9}, iterate {}, height {:.3e}", w.x, w.iterate, w.height);
        }
    }
    Ok(())
}
