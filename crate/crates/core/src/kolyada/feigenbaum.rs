use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Logistic parameter of the period-doubling accumulation point (type `2^∞`).
pub const FEIGENBAUM_LAMBDA: f64 = 3.5699456718695445;

/// Largest level supported by [`feigenbaum_intervals`].
pub const MAX_LEVEL: usize = 12;

/// Bound on the `f(J_k^n)` versus `J_{k+1}^n` Hausdorff defect.
pub const IMAGE_TOLERANCE: f64 = 1e-6;

/// Per-level validation margins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: usize,
    /// Smallest gap between consecutive intervals of the level (disjointness).
    pub min_gap: f64,
    /// Largest Hausdorff distance between `f(J_k^n)` and `J_{k+1}^n`.
    pub image_defect: f64,
    pub max_width: f64,
}

/// The cycles of intervals `J_k^n` (`n ≤ N`, `k < 2ⁿ`) of the logistic map, with
/// `f(J_k^n) ≈ J_{k+1 mod 2ⁿ}^n` and the critical point in `J_0^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicIntervalSystem {
    pub lambda: f64,
    pub max_level: usize,
    /// `levels[n][k] = J_k^n`.
    levels: Vec<Vec<(f64, f64)>>,
    pub reports: Vec<LevelReport>,
    /// Critical-orbit samples `f^j(1/2)`, `B ≤ j < B + 2^N·M`, kept for sampling `Q`.
    #[serde(skip)]
    samples: Vec<f64>,
    pub transient: usize,
}

impl DyadicIntervalSystem {
    pub fn interval(&self, n: usize, k: usize) -> (f64, f64) {
        self.levels[n][k]
    }

    pub fn level(&self, n: usize) -> &[(f64, f64)] {
        &self.levels[n]
    }

    pub fn logistic(&self, x: f64) -> f64 {
        self.lambda * x * (1.0 - x)
    }

    /// Orbit samples of the critical point, starting at index `transient`.
    pub fn critical_samples(&self) -> &[f64] {
        &self.samples
    }

    /// `k` with `x ∈ J_k^n`, if any.
    pub fn locate(&self, n: usize, x: f64) -> Option<usize> {
        self.levels[n].iter().position(|&(a, b)| a <= x && x <= b)
    }

    /// Exact image of an interval under the logistic map.
    pub fn image(&self, (a, b): (f64, f64)) -> (f64, f64) {
        let (fa, fb) = (self.logistic(a), self.logistic(b));
        let lo = fa.min(fb);
        let mut hi = fa.max(fb);
        if a <= 0.5 && 0.5 <= b {
            hi = hi.max(self.logistic(0.5));
        }
        (lo, hi)
    }

    /// The gaps `J_k^{n−1} \ (J_k^n ∪ J_{k+2^{n−1}}^n)` for `1 ≤ n ≤ level`, as
    /// `(n, k, gap)`.
    pub fn gaps(&self, level: usize) -> Vec<(usize, usize, (f64, f64))> {
        let mut out = Vec::new();
        for n in 1..=level.min(self.max_level) {
            let half = 1 << (n - 1);
            for k in 0..half {
                let (a, b) = (self.levels[n][k], self.levels[n][k + half]);
                let gap = if a.1 < b.0 { (a.1, b.0) } else { (b.1, a.0) };
                out.push((n, k, gap));
            }
        }
        out
    }

    /// A point of period `2^{n−1}` inside each gap up to `level`, the root of
    /// `f^{2^{n−1}}(x) − x` nearest the gap midpoint.
    pub fn gap_periodic_points(&self, level: usize) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for (n, k, (a, b)) in self.gaps(level) {
            let p = 1usize << (n - 1);
            let g = |x: f64| {
                let mut y = x;
                for _ in 0..p {
                    y = self.logistic(y);
                }
                y - x
            };
            let samples = 256;
            let xs: Vec<f64> = (0..=samples).map(|i| a + (b - a) * i as f64 / samples as f64).collect();
            let ys: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
            let mid = 0.5 * (a + b);
            let mut best: Option<f64> = None;
            for i in 0..samples {
                if ys[i] == 0.0 || ys[i].signum() != ys[i + 1].signum() {
                    let (mut lo, mut hi, mut glo) = (xs[i], xs[i + 1], ys[i]);
                    while hi - lo > 1e-15 {
                        let m = 0.5 * (lo + hi);
                        let gm = g(m);
                        if gm == 0.0 {
                            lo = m;
                            hi = m;
                            break;
                        }
                        if gm.signum() == glo.signum() {
                            lo = m;
                            glo = gm;
                        } else {
                            hi = m;
                        }
                    }
                    let root = 0.5 * (lo + hi);
                    if best.is_none_or(|r| (root - mid).abs() < (r - mid).abs()) {
                        best = Some(root);
                    }
                }
            }
            out.push(best.ok_or_else(|| {
                Error::Construction(format!("no period-{p} point found in the level-{n} gap of J_{k}^{}", n - 1))
            })?);
        }
        Ok(out)
    }

    /// CSV `n,k,left,right`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,left,right\n");
        for (n, level) in self.levels.iter().enumerate() {
            for (k, (a, b)) in level.iter().enumerate() {
                let _ = writeln!(out, "{n},{k},{a:.16e},{b:.16e}");
            }
        }
        out
    }
}

/// Builds `J_k^n` as the hull of `{f^j(1/2) : j ≡ k (mod 2ⁿ), B ≤ j < B + 2^N·M}` and
/// validates disjointness, exact two-child nesting, the cyclic image property and
/// shrinking widths.
pub fn feigenbaum_intervals(lambda: f64, n_max: usize, transient: usize, samples: usize) -> Result<DyadicIntervalSystem> {
    if n_max > MAX_LEVEL {
        return Err(Error::arg(format!("max level {n_max} exceeds {MAX_LEVEL}")));
    }
    if transient < 1000 || samples < 256 {
        return Err(Error::arg("need transient B ≥ 1000 and samples M ≥ 256"));
    }
    if (lambda - FEIGENBAUM_LAMBDA).abs() > 1e-3 {
        return Err(Error::arg(format!("lambda {lambda} is not near the Feigenbaum point {FEIGENBAUM_LAMBDA}")));
    }
    let f = |x: f64| lambda * x * (1.0 - x);
    let mut x = 0.5;
    for _ in 0..transient {
        x = f(x);
    }
    let count = (1usize << n_max) * samples;
    let mut orbit = Vec::with_capacity(count);
    for _ in 0..count {
        orbit.push(x);
        x = f(x);
    }
    // classes follow the global index so that 1/2 = f^0(1/2) belongs to class 0
    let phase = transient % (1 << n_max);
    let mut levels: Vec<Vec<(f64, f64)>> =
        (0..=n_max).map(|n| vec![(f64::INFINITY, f64::NEG_INFINITY); 1 << n]).collect();
    for (i, &v) in orbit.iter().enumerate() {
        let j = i + phase;
        for (n, level) in levels.iter_mut().enumerate() {
            let slot = &mut level[j & ((1 << n) - 1)];
            slot.0 = slot.0.min(v);
            slot.1 = slot.1.max(v);
        }
    }
    let mut system = DyadicIntervalSystem { lambda, max_level: n_max, levels, reports: Vec::new(), samples: orbit, transient };
    system.reports = validate(&system)?;
    Ok(system)
}

fn validate(s: &DyadicIntervalSystem) -> Result<Vec<LevelReport>> {
    let mut reports = Vec::new();
    let mut prev_width = f64::INFINITY;
    for n in 0..=s.max_level {
        let level = &s.levels[n];
        // disjoint within a level
        let mut sorted = level.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let min_gap = sorted.windows(2).map(|w| w[1].0 - w[0].1).fold(f64::INFINITY, f64::min);
        if sorted.len() > 1 && !(min_gap > 0.0) {
            return Err(Error::Construction(format!("level {n}: intervals are not disjoint (gap {min_gap})")));
        }
        // nested in the parent
        if n >= 1 {
            let half = 1 << (n - 1);
            for k in 0..half {
                let parent = s.levels[n - 1][k];
                for child in [level[k], level[k + half]] {
                    if child.0 < parent.0 || child.1 > parent.1 {
                        return Err(Error::Construction(format!("level {n}: J_{k}^{n} is not inside J_{k}^{}", n - 1)));
                    }
                }
            }
        }
        if !(level[0].0 <= 0.5 && 0.5 <= level[0].1) {
            return Err(Error::Construction(format!("level {n}: the critical point is not in J_0^{n}")));
        }
        // f maps J_k onto J_{k+1}
        let size = level.len();
        let mut defect = 0.0f64;
        for k in 0..size {
            let img = s.image(level[k]);
            let next = level[(k + 1) % size];
            defect = defect.max((img.0 - next.0).abs()).max((img.1 - next.1).abs());
        }
        if defect > IMAGE_TOLERANCE {
            return Err(Error::Construction(format!("level {n}: image Hausdorff defect {defect:e} exceeds tolerance")));
        }
        // shrinking widths
        let max_width = level.iter().map(|(a, b)| b - a).fold(0.0, f64::max);
        if !(max_width < prev_width) {
            return Err(Error::Construction(format!("level {n}: widths did not decrease")));
        }
        prev_width = max_width;
        reports.push(LevelReport { level: n, min_gap, image_defect: defect, max_width });
    }
    Ok(reports)
}
