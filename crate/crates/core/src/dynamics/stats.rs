//! Close-pair counts and finite-horizon distribution functions.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Distance, DynamicalSystem, OrbitSegment};
use crate::error::{Error, Result};

/// `ξ(x, y, t, n)`: the number of `j ∈ [0, n)` with `d(fʲx, fʲy) < t`, where `n` is
/// the number of steps in the orbit segments.
pub fn xi_count<D: DynamicalSystem + ?Sized>(
    system: &D,
    orbit_x: &OrbitSegment<D::State>,
    orbit_y: &OrbitSegment<D::State>,
    t: f64,
) -> Result<usize> {
    check_pair(orbit_x, orbit_y)?;
    if !(t > 0.0) {
        return Ok(0);
    }
    let n = orbit_x.steps();
    let mut count = 0;
    for j in 0..n {
        if system.distance(&orbit_x.points[j], &orbit_y.points[j]).less_than(t)? {
            count += 1;
        }
    }
    Ok(count)
}

/// `Ψⁿ_xy(t) = ξ(x, y, t, n) / n`.
pub fn psi_n<D: DynamicalSystem + ?Sized>(
    system: &D,
    orbit_x: &OrbitSegment<D::State>,
    orbit_y: &OrbitSegment<D::State>,
    t: f64,
) -> Result<f64> {
    check_pair(orbit_x, orbit_y)?;
    let n = orbit_x.steps();
    if n == 0 {
        return Err(Error::arg("psi_n needs at least one step (n ≥ 1)"));
    }
    Ok(xi_count(system, orbit_x, orbit_y, t)? as f64 / n as f64)
}

fn check_pair<S>(a: &OrbitSegment<S>, b: &OrbitSegment<S>) -> Result<()> {
    if a.points.len() != b.points.len() {
        return Err(Error::arg(format!(
            "orbit lengths differ ({} vs {})",
            a.points.len(),
            b.points.len()
        )));
    }
    if a.system_id != b.system_id {
        return Err(Error::arg(format!(
            "orbits come from different systems ({} vs {})",
            a.system_id, b.system_id
        )));
    }
    Ok(())
}

/// Thresholds `{2^-j : j = 0..=10}` in ascending order.
pub fn default_t_grid() -> Vec<f64> {
    (0..=10).rev().map(|j| 0.5f64.powi(j)).collect()
}

/// Roughly geometric horizon schedule `1 ≤ n ≤ max` with `per_octave` points per
/// doubling, always ending at `max`.
pub fn geometric_horizons(max: usize, per_octave: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if max == 0 {
        return out;
    }
    let per_octave = per_octave.max(1) as f64;
    let mut k = 0.0;
    loop {
        let n = 2f64.powf(k / per_octave).round() as usize;
        if n >= max {
            break;
        }
        if out.last() != Some(&n) {
            out.push(n);
        }
        k += 1.0;
    }
    out.push(max);
    out
}

/// Table of `Ψⁿ(t)` over a threshold grid and a horizon schedule for one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionalProfile {
    pub t_grid: Vec<f64>,
    pub horizons: Vec<usize>,
    /// `values[h][k] = Ψ^{horizons[h]}(t_grid[k])`.
    pub values: Vec<Vec<f64>>,
    pub pair: (String, String),
}

impl DistributionalProfile {
    pub fn labeled(mut self, x: impl Into<String>, y: impl Into<String>) -> Self {
        self.pair = (x.into(), y.into());
        self
    }

    /// Largest horizon in the schedule.
    pub fn horizon(&self) -> usize {
        self.horizons.last().copied().unwrap_or(0)
    }

    pub fn t_index(&self, t: f64) -> Result<usize> {
        self.t_grid
            .iter()
            .position(|&s| s == t)
            .ok_or_else(|| Error::arg(format!("threshold {t} is not on the profile grid")))
    }

    /// Value at horizon `n` (must be on the schedule) and threshold `t`.
    pub fn value(&self, n: usize, t: f64) -> Result<f64> {
        let k = self.t_index(t)?;
        let h = self
            .horizons
            .iter()
            .position(|&m| m == n)
            .ok_or_else(|| Error::arg(format!("horizon {n} is not on the profile schedule")))?;
        Ok(self.values[h][k])
    }

    /// CSV with header `t,n,psi`, one row per (t, horizon), 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,n,psi\n");
        for (k, t) in self.t_grid.iter().enumerate() {
            for (h, n) in self.horizons.iter().enumerate() {
                let _ = writeln!(out, "{t:.16e},{n},{:.16e}", self.values[h][k]);
            }
        }
        out
    }
}

/// Computes a [`DistributionalProfile`] in a single pass over the pair orbit.
///
/// Each step's distance is binned by the smallest grid threshold it falls under;
/// cumulative bin counts at each scheduled horizon give all `Ψⁿ(t)` at once.
pub fn psi_profile<D: DynamicalSystem + ?Sized>(
    system: &D,
    x: &D::State,
    y: &D::State,
    t_grid: &[f64],
    horizons: &[usize],
) -> Result<DistributionalProfile> {
    if t_grid.is_empty() || horizons.is_empty() {
        return Err(Error::arg("t-grid and horizon schedule must be nonempty"));
    }
    if t_grid.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        return Err(Error::arg("t-grid values must lie in (0, 1]"));
    }
    if t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::arg("t-grid must be strictly ascending"));
    }
    if horizons[0] == 0 || horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::arg("horizons must be positive and strictly ascending"));
    }
    let grid = t_grid.len();
    let max_n = *horizons.last().unwrap();
    let mut bins = vec![0usize; grid];
    let mut values = Vec::with_capacity(horizons.len());
    let mut next_checkpoint = 0;
    let binner = Binner::new(t_grid);
    system.for_each_pair_distance(x, y, max_n, &mut |j, d| {
        let k = binner.bin(&d)?;
        if k < grid {
            bins[k] += 1;
        }
        let steps = j + 1;
        if steps == horizons[next_checkpoint] {
            let mut row = Vec::with_capacity(grid);
            let mut acc = 0usize;
            for &b in &bins {
                acc += b;
                row.push(acc as f64 / steps as f64);
            }
            values.push(row);
            next_checkpoint += 1;
        }
        Ok(())
    })?;
    debug_assert_eq!(values.len(), horizons.len());
    Ok(DistributionalProfile {
        t_grid: t_grid.to_vec(),
        horizons: horizons.to_vec(),
        values,
        pair: ("x".into(), "y".into()),
    })
}

/// Maps a distance to the index of the smallest grid threshold `t_k` with `d < t_k`
/// (grid length if none), with a lookup table for shift-space reciprocals.
struct Binner<'a> {
    t_grid: &'a [f64],
    /// `reciprocal[i]` is the bin of `1/i`; reciprocals past the table fall in bin 0.
    reciprocal: Vec<u16>,
}

impl<'a> Binner<'a> {
    const TABLE_CAP: u64 = 1 << 16;

    fn new(t_grid: &'a [f64]) -> Self {
        let mut reciprocal = Vec::new();
        if t_grid.len() < u16::MAX as usize {
            // least i with 1/i < t_0 bounds the table
            let t0 = t_grid[0];
            let first = (1..=Self::TABLE_CAP).find(|&i| super::reciprocal_less_than(i, t0));
            if let Some(first) = first {
                reciprocal = (0..first)
                    .map(|i| {
                        if i == 0 {
                            t_grid.len() as u16
                        } else {
                            first_threshold_above(&Distance::Reciprocal(i), t_grid).unwrap() as u16
                        }
                    })
                    .collect();
            }
        }
        Binner { t_grid, reciprocal }
    }

    #[inline]
    fn bin(&self, d: &Distance) -> Result<usize> {
        if let Distance::Reciprocal(i) = *d {
            if !self.reciprocal.is_empty() {
                return Ok(self.reciprocal.get(i as usize).map_or(0, |&b| b as usize));
            }
        }
        first_threshold_above(d, self.t_grid)
    }
}

/// Index of the smallest grid threshold `t_k` with `d < t_k` (grid length if none).
fn first_threshold_above(d: &Distance, t_grid: &[f64]) -> Result<usize> {
    let (mut lo, mut hi) = (0usize, t_grid.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if d.less_than(t_grid[mid])? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Horizons over which liminf/limsup are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HorizonWindow {
    /// Horizons `n ≥ N/2` where `N` is the largest scheduled horizon.
    UpperHalf,
    /// Every scheduled horizon (used with designed checkpoint schedules).
    All,
    /// Horizons in `[lo, hi]`.
    Range(usize, usize),
}

impl HorizonWindow {
    fn bounds(&self, max: usize) -> (usize, usize) {
        match *self {
            HorizonWindow::UpperHalf => (max.div_ceil(2), max),
            HorizonWindow::All => (0, max),
            HorizonWindow::Range(lo, hi) => (lo, hi),
        }
    }
}

/// Finite-horizon estimates of `Ψ_xy(t)` (liminf) and `Ψ*_xy(t)` (limsup).
///
/// These are the minimum and maximum of `Ψⁿ(t)` over the horizons in the window,
/// not limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiBounds {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
    /// Smallest and largest horizon actually used.
    pub window: (usize, usize),
}

pub fn psi_bounds(profile: &DistributionalProfile, t: f64, window: HorizonWindow) -> Result<PsiBounds> {
    let k = profile.t_index(t)?;
    let (lo, hi) = window.bounds(profile.horizon());
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    let mut used: Option<(usize, usize)> = None;
    for (h, &n) in profile.horizons.iter().enumerate() {
        if n < lo || n > hi {
            continue;
        }
        let v = profile.values[h][k];
        lower = lower.min(v);
        upper = upper.max(v);
        used = Some(match used {
            None => (n, n),
            Some((a, _)) => (a, n),
        });
    }
    let window = used.ok_or_else(|| Error::arg(format!("no scheduled horizon in window [{lo}, {hi}]")))?;
    Ok(PsiBounds { t, lower, upper, window })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_ascending_powers_of_two() {
        let g = default_t_grid();
        assert_eq!(g.len(), 11);
        assert_eq!((g[0], g[10]), (1.0 / 1024.0, 1.0));
    }

    #[test]
    fn geometric_schedule_ends_at_max() {
        let h = geometric_horizons(1000, 2);
        assert_eq!(h[0], 1);
        assert_eq!(*h.last().unwrap(), 1000);
        assert!(h.windows(2).all(|w| w[0] < w[1]));
        assert!(geometric_horizons(0, 2).is_empty());
    }

    #[test]
    fn upper_half_window_skips_early_horizons() {
        let p = DistributionalProfile {
            t_grid: vec![1.0],
            horizons: vec![10, 60, 100],
            values: vec![vec![0.0], vec![0.5], vec![0.7]],
            pair: ("x".into(), "y".into()),
        };
        let b = psi_bounds(&p, 1.0, HorizonWindow::UpperHalf).unwrap();
        assert_eq!((b.lower, b.upper, b.window), (0.5, 0.7, (60, 100)));
        let b = psi_bounds(&p, 1.0, HorizonWindow::All).unwrap();
        assert_eq!((b.lower, b.window), (0.0, (10, 100)));
        assert!(psi_bounds(&p, 0.5, HorizonWindow::All).is_err());
    }
}
