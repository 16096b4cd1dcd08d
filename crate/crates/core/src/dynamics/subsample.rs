//! Close-pair ratios of `f` against those of `g = f^k` on the subsampled orbit.

use serde::{Deserialize, Serialize};

use super::stats::geometric_horizons;
use super::DynamicalSystem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsampleRow {
    /// Steps of `f`.
    pub n: usize,
    /// `ξ_f(x, y, t, n) / n`.
    pub f_ratio: f64,
    /// Steps of `g`, i.e. `⌊n/k⌋`.
    pub g_steps: usize,
    /// `ξ_g(x, y, t, ⌊n/k⌋) / ⌊n/k⌋`.
    pub g_ratio: f64,
    pub difference: f64,
}

/// Both ratio sequences along a geometric horizon schedule ending at `n`.
///
/// This is a report only: nothing here decides pass or fail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsampleReport {
    pub k: usize,
    pub t: f64,
    pub rows: Vec<SubsampleRow>,
}

impl SubsampleReport {
    pub fn last(&self) -> &SubsampleRow {
        self.rows.last().expect("report has at least one row")
    }
}

pub fn subsample_check<D: DynamicalSystem + ?Sized>(
    system: &D,
    k: usize,
    x: &D::State,
    y: &D::State,
    t: f64,
    n: usize,
) -> Result<SubsampleReport> {
    if k == 0 || n < k {
        return Err(Error::arg(format!("subsample check needs k ≥ 1 and n ≥ k (k = {k}, n = {n})")));
    }
    let horizons: Vec<usize> = geometric_horizons(n, 2).into_iter().filter(|&m| m >= k).collect();
    let mut rows = Vec::with_capacity(horizons.len());
    let mut f_hits = 0usize;
    // g_cum[i] = close times among the first i steps of g
    let mut g_cum = Vec::with_capacity(n / k + 1);
    g_cum.push(0usize);
    let mut next = 0;
    system.for_each_pair_distance(x, y, n, &mut |j, d| {
        let close = t > 0.0 && d.less_than(t)?;
        if close {
            f_hits += 1;
        }
        if j % k == 0 {
            let last = *g_cum.last().unwrap();
            g_cum.push(last + close as usize);
        }
        let steps = j + 1;
        if next < horizons.len() && steps == horizons[next] {
            let f_ratio = f_hits as f64 / steps as f64;
            let g_steps = steps / k;
            let g_ratio = g_cum[g_steps] as f64 / g_steps as f64;
            rows.push(SubsampleRow { n: steps, f_ratio, g_steps, g_ratio, difference: f_ratio - g_ratio });
            next += 1;
        }
        Ok(())
    })?;
    Ok(SubsampleReport { k, t, rows })
}
