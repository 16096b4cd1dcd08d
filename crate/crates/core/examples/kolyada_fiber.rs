//! Fiber range over a level-1 plateau point of the triangular map built on the
//! Feigenbaum logistic map.

use distchaos::interval::IntervalMap1D;
use distchaos::kolyada::*;

fn main() -> distchaos::Result<()> {
    let system = feigenbaum_intervals(FEIGENBAUM_LAMBDA, MAX_LEVEL, 4096, 256)?;
    for r in system.reports.iter().take(6) {
        println!("level {:>2}: min gap {:.3e}, max width {:.3e}", r.level, r.min_gap, r.max_width);
    }
    let heights = build_height_field(&system, &NSequence::default(), 8)?;
    let kset = KSet::new(FEIGENBAUM_LAMBDA, &heights.zero_anchors, K_ORBIT_LEN);
    let spec = TriangularMapSpec::new(IntervalMap1D::logistic(FEIGENBAUM_LAMBDA)?, heights);
    let x0 = plateau_point(&system, 1, &kset)?;
    let trace = fiber_range(&spec, x0, 100_000)?;
    let s = lemma3_statistics(&trace, 1.0)?;
    println!("x0 = {x0:.12}: sup {:.4}, inf {:.3e}, entries >= 0.9: {}, <= 2^-5: {}", s.sup, s.inf, s.high_hits, s.low_hits[0]);
    Ok(())
}
