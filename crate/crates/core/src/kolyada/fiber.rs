use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::feigenbaum::DyadicIntervalSystem;
use super::triangular::TriangularMapSpec;
use crate::error::{Error, Result};

/// `v_j = |R(F, x0, j)|`: the fiber image over `f^j(x0)` is `[0, v_j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberRangeTrace {
    pub x0: f64,
    pub values: Vec<f64>,
}

impl FiberRangeTrace {
    /// Re-runs the recursion and returns the first `j` where it disagrees.
    pub fn recheck(&self, spec: &TriangularMapSpec) -> Option<usize> {
        let mut x = self.x0;
        for j in 0..self.values.len().saturating_sub(1) {
            let next = spec.h(x) * (2.0 * self.values[j]).min(1.0);
            if next != self.values[j + 1] {
                return Some(j + 1);
            }
            x = spec.base.eval(x);
        }
        None
    }

    /// CSV `j,v`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,v\n");
        for (j, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{j},{v:.16e}");
        }
        out
    }
}

/// `v_0 = 1`, `v_{j+1} = h(f^j x0)·min(2v_j, 1)` for `j < horizon`.
pub fn fiber_range(spec: &TriangularMapSpec, x0: f64, horizon: usize) -> Result<FiberRangeTrace> {
    fiber_range_from(spec, x0, 1.0, horizon)
}

pub fn fiber_range_from(spec: &TriangularMapSpec, x0: f64, v0: f64, horizon: usize) -> Result<FiberRangeTrace> {
    if horizon == 0 {
        return Err(Error::arg("fiber range horizon must be at least 1"));
    }
    if !(0.0..=1.0).contains(&x0) || !(0.0..=1.0).contains(&v0) {
        return Err(Error::arg(format!("({x0}, {v0}) is outside the unit square")));
    }
    let mut values = Vec::with_capacity(horizon + 1);
    values.push(v0);
    let mut x = x0;
    for j in 0..horizon {
        values.push(spec.h(x) * (2.0 * values[j]).min(1.0));
        x = spec.base.apply(x, j + 1)?;
    }
    Ok(FiberRangeTrace { x0, values })
}

pub const SUP_THRESHOLD: f64 = 0.9;
pub const INF_THRESHOLDS: [f64; 2] = [1.0 / 32.0, 1.0 / 256.0];
pub const MIN_TRACE: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Statistics {
    pub tail_start: usize,
    pub sup: f64,
    pub inf: f64,
    /// Tail entries with `v ≥ 0.9`.
    pub high_hits: usize,
    /// Tail entries with `v ≤ 2^-5` and `v ≤ 2^-8`.
    pub low_hits: [usize; 2],
}

/// Extremes and threshold hits over the last `tail_fraction` of the trace.
pub fn lemma3_statistics(trace: &FiberRangeTrace, tail_fraction: f64) -> Result<Lemma3Statistics> {
    let len = trace.values.len();
    if len < MIN_TRACE {
        return Err(Error::arg(format!("trace of length {len} is shorter than {MIN_TRACE}")));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::arg(format!("tail fraction {tail_fraction} must lie in (0, 1]")));
    }
    let tail_start = len - ((len as f64 * tail_fraction).ceil() as usize).clamp(1, len);
    let tail = &trace.values[tail_start..];
    Ok(Lemma3Statistics {
        tail_start,
        sup: tail.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        inf: tail.iter().copied().fold(f64::INFINITY, f64::min),
        high_hits: tail.iter().filter(|&&v| v >= SUP_THRESHOLD).count(),
        low_hits: INF_THRESHOLDS.map(|t| tail.iter().filter(|&&v| v <= t).count()),
    })
}

pub const K_TOLERANCE: f64 = 1e-9;

/// Finite surrogate of `K`, the two-sided orbit of the zero anchors.
#[derive(Debug, Clone)]
pub struct KSet {
    lambda: f64,
    anchors: Vec<f64>,
    /// Forward images of the anchors, sorted.
    images: Vec<f64>,
    pub orbit_len: usize,
    pub tolerance: f64,
}

impl KSet {
    pub fn new(lambda: f64, anchors: &[f64], orbit_len: usize) -> Self {
        let f = |x: f64| lambda * x * (1.0 - x);
        let mut images = Vec::with_capacity(anchors.len() * (orbit_len + 1));
        for &a in anchors {
            let mut x = a;
            for _ in 0..=orbit_len {
                images.push(x);
                x = f(x);
            }
        }
        images.sort_by(f64::total_cmp);
        let mut anchors = anchors.to_vec();
        anchors.sort_by(f64::total_cmp);
        KSet { lambda, anchors, images, orbit_len, tolerance: K_TOLERANCE }
    }

    fn near(sorted: &[f64], x: f64, tol: f64) -> bool {
        let i = sorted.partition_point(|&a| a < x - tol);
        i < sorted.len() && sorted[i] <= x + tol
    }

    /// Whether a forward iterate of `x` meets an anchor, or `x` meets a forward
    /// image of one.
    pub fn contains(&self, x: f64) -> bool {
        if Self::near(&self.images, x, self.tolerance) {
            return true;
        }
        let mut y = x;
        for _ in 0..=self.orbit_len {
            if Self::near(&self.anchors, y, self.tolerance) {
                return true;
            }
            y = self.lambda * y * (1.0 - y);
        }
        false
    }
}

/// Default scan length for K-set membership.
pub const K_ORBIT_LEN: usize = 256;

pub fn k_set_test(system: &DyadicIntervalSystem, x: f64, depth: usize, orbit_len: usize) -> Result<bool> {
    let mut anchors = vec![0.0, 0.5, 1.0];
    anchors.extend(system.gap_periodic_points(depth)?);
    Ok(KSet::new(system.lambda, &anchors, orbit_len).contains(x))
}

/// Critical-orbit samples lying in `J_k^n`, skipping members of `kset`.
pub fn q_samples(system: &DyadicIntervalSystem, n: usize, k: usize, kset: &KSet, limit: usize) -> Vec<f64> {
    let period = 1usize << n;
    let first = (k + period - system.transient % period) % period;
    system
        .critical_samples()
        .iter()
        .skip(first)
        .step_by(period)
        .copied()
        .filter(|&x| !kset.contains(x))
        .take(limit)
        .collect()
}

/// First K-filtered sample in the level-`n` plateau set `J^n_{2^{n-1}}`.
pub fn plateau_point(system: &DyadicIntervalSystem, n: usize, kset: &KSet) -> Result<f64> {
    if n == 0 || n > system.max_level {
        return Err(Error::arg(format!("plateau level {n} must lie in 1..={}", system.max_level)));
    }
    q_samples(system, n, 1 << (n - 1), kset, 1)
        .first()
        .copied()
        .ok_or_else(|| Error::Construction(format!("no sample outside K in the level-{n} plateau")))
}
