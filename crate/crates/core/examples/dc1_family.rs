//! Four members of the DC1-scrambled shift family, classified pairwise at the
//! designed checkpoints.

use distchaos::dynamics::{classify_pair, default_t_grid, psi_profile, HorizonWindow};
use distchaos::symbolic::{build_dc1_family, SegmentSchedule, ShiftPoint, ShiftSystem};

fn main() -> distchaos::Result<()> {
    let schedule = SegmentSchedule::registered(1)?;
    let horizons = schedule.checkpoints(100_000, 0);
    let family = build_dc1_family(4, schedule)?;
    let shift = ShiftSystem::default();
    for (i, j) in family.pairs() {
        let x = ShiftPoint::member(family.members[i].clone());
        let y = ShiftPoint::member(family.members[j].clone());
        let profile = psi_profile(&shift, &x, &y, &default_t_grid(), &horizons)?;
        let c = classify_pair(&profile, 0.05, HorizonWindow::All)?;
        println!("{x} vs {y}: {}", c.summary());
    }
    Ok(())
}
