//! Pulls a DC1-scrambled shift family back into the interval through a
//! horseshoe and its nested interval tree.

use std::sync::Arc;

use distchaos::interval::{dc1_point_sample, find_horseshoe, refine_tree, IntervalMap1D, PullbackSettings};
use distchaos::symbolic::{build_dc1_family, Radius, SegmentSchedule, ShiftPoint};

fn main() -> distchaos::Result<()> {
    let f = IntervalMap1D::logistic(4.0)?;
    let h = find_horseshoe(&f, 4, 1024)?.expect("full logistic map has a horseshoe");
    let tree = Arc::new(refine_tree(&f, &h, 10)?);
    let family = build_dc1_family(4, SegmentSchedule::registered(3)?)?;
    let alpha: ShiftPoint = "|011".parse()?;
    let r = dc1_point_sample(tree, &alpha, &family, Radius::reciprocal(4)?, PullbackSettings::default())?;
    println!("x0 = {:.12} (word {}), residual width {:.2e}", r.x0, r.x0_word, r.residual_width);
    for p in &r.certificate.pairs {
        println!("{} vs {}: {}", p.x, p.y, p.classification.summary());
    }
    println!("certificate pass = {}", r.certificate.pass);
    Ok(())
}
