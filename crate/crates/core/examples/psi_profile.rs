//! Distributional profile of one pair under the full logistic map.

use distchaos::dynamics::{classify_pair, default_t_grid, geometric_horizons, psi_profile, HorizonWindow};
use distchaos::interval::IntervalMap1D;

fn main() -> distchaos::Result<()> {
    let f = IntervalMap1D::logistic(4.0)?;
    let (x, y) = (0.1, 0.1 + 1e-9);
    let profile = psi_profile(&f, &x, &y, &default_t_grid(), &geometric_horizons(100_000, 2))?;
    for (k, t) in profile.t_grid.iter().enumerate() {
        println!("t = {t:<12} Psi^N = {:.4}", profile.values.last().unwrap()[k]);
    }
    let c = classify_pair(&profile, 0.05, HorizonWindow::UpperHalf)?;
    println!("{}", c.summary());
    Ok(())
}
