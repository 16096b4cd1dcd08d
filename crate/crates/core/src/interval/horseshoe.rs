use serde::{Deserialize, Serialize};

use super::map::IntervalMap1D;
use crate::error::{Error, Result};

/// Covering margins down to this (negative) value are accepted: exact full-branch
/// covers such as the tent halves have margin zero up to rounding.
pub const COVER_TOLERANCE: f64 = 1e-12;

/// Evaluated points showing that `f^k(J)` reaches both ends of the covered hull.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverWitness {
    pub low_point: f64,
    pub low_value: f64,
    pub high_point: f64,
    pub high_value: f64,
}

/// Closed intervals `J_1, …, J_s` with disjoint interiors such that `f^k(J_i)`
/// contains their union for every `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Horseshoe {
    pub k: usize,
    pub intervals: Vec<(f64, f64)>,
    pub witnesses: Vec<CoverWitness>,
    /// `min_i min(left − f^k(low_i), f^k(high_i) − right)` over the hull `[left, right]`.
    pub margin: f64,
    /// Whether the intervals are pairwise disjoint (not just their interiors).
    pub strict: bool,
}

impl Horseshoe {
    pub fn s(&self) -> usize {
        self.intervals.len()
    }

    fn hull(intervals: &[(f64, f64)]) -> (f64, f64) {
        let left = intervals.iter().map(|i| i.0).fold(f64::INFINITY, f64::min);
        let right = intervals.iter().map(|i| i.1).fold(f64::NEG_INFINITY, f64::max);
        (left, right)
    }

    /// Certifies given intervals by sampling each with `samples` evenly spaced
    /// points (endpoints included).
    pub fn certify(f: &IntervalMap1D, k: usize, intervals: Vec<(f64, f64)>, samples: usize) -> Result<Horseshoe> {
        if k == 0 || intervals.len() < 2 || samples < 2 {
            return Err(Error::arg("a horseshoe needs k ≥ 1, at least two intervals and two samples"));
        }
        let mut sorted = intervals.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        if sorted.iter().any(|&(a, b)| !(a < b)) || sorted.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::arg("horseshoe intervals must be nondegenerate with disjoint interiors"));
        }
        let strict = sorted.windows(2).all(|w| w[0].1 < w[1].0);
        let (left, right) = Self::hull(&intervals);
        let mut witnesses = Vec::with_capacity(intervals.len());
        let mut margin = f64::INFINITY;
        for &(a, b) in &intervals {
            let w = sample_extremes(f, k, a, b, samples);
            margin = margin.min(left - w.low_value).min(w.high_value - right);
            witnesses.push(w);
        }
        Ok(Horseshoe { k, intervals, witnesses, margin, strict })
    }

    pub fn is_certified(&self) -> bool {
        self.margin >= -COVER_TOLERANCE
    }

    /// Covering margin from a fresh sampling at `samples` points per interval; this
    /// can only confirm or improve on the certificate, never contradict it.
    pub fn recheck(&self, f: &IntervalMap1D, samples: usize) -> f64 {
        let (left, right) = Self::hull(&self.intervals);
        let mut margin = f64::INFINITY;
        for (&(a, b), w) in self.intervals.iter().zip(&self.witnesses) {
            let s = sample_extremes(f, self.k, a, b, samples);
            let low = s.low_value.min(f.eval_iter(w.low_point, self.k));
            let high = s.high_value.max(f.eval_iter(w.high_point, self.k));
            margin = margin.min(left - low).min(high - right);
        }
        margin
    }
}

fn sample_extremes(f: &IntervalMap1D, k: usize, a: f64, b: f64, samples: usize) -> CoverWitness {
    let mut w = CoverWitness { low_point: a, low_value: f64::INFINITY, high_point: a, high_value: f64::NEG_INFINITY };
    for i in 0..samples {
        let x = if i + 1 == samples { b } else { a + (b - a) * i as f64 / (samples - 1) as f64 };
        let y = f.eval_iter(x, k);
        if y < w.low_value {
            w.low_value = y;
            w.low_point = x;
        }
        if y > w.high_value {
            w.high_value = y;
            w.high_point = x;
        }
    }
    w
}

/// `log(s)/k`.
pub fn entropy_lower_bound(h: &Horseshoe) -> f64 {
    (h.s() as f64).ln() / h.k as f64
}

/// Range-extreme queries over cell values.
struct SparseTable {
    levels: Vec<Vec<usize>>,
}

impl SparseTable {
    /// `better(i, j)` is true when cell `i` beats cell `j`.
    fn new(len: usize, better: &impl Fn(usize, usize) -> bool) -> Self {
        let mut levels = vec![(0..len).collect::<Vec<_>>()];
        let mut width = 1;
        while 2 * width <= len {
            let prev = levels.last().unwrap();
            let next = (0..=len - 2 * width)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + width]);
                    if better(b, a) {
                        b
                    } else {
                        a
                    }
                })
                .collect();
            levels.push(next);
            width *= 2;
        }
        SparseTable { levels }
    }

    /// Best cell in `lo..hi` (nonempty).
    fn query(&self, lo: usize, hi: usize, better: &impl Fn(usize, usize) -> bool) -> usize {
        let len = hi - lo;
        let level = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let (a, b) = (self.levels[level][lo], self.levels[level][hi - (1 << level)]);
        if better(b, a) {
            b
        } else {
            a
        }
    }
}

const SAMPLES_PER_CELL: usize = 5;

/// Searches `k = 1..=k_max` for a 2-horseshoe made of unions of grid cells.
///
/// For each `k`, every candidate hull `[a/N, d/N]` (widest first) is split at the
/// smallest cell boundary `b` for which `f^k([a/N, b/N])` covers the hull, and the
/// complement `[b/N, d/N]` is tested; a one-cell gap is tried first so strict
/// horseshoes are preferred. Ranges come from sampling each cell at
/// 5 points, so a reported cover is always backed by evaluated witnesses.
pub fn find_horseshoe(f: &IntervalMap1D, k_max: usize, grid_resolution: usize) -> Result<Option<Horseshoe>> {
    if k_max == 0 {
        return Err(Error::arg("k_max must be at least 1"));
    }
    if grid_resolution < 64 {
        return Err(Error::arg("grid resolution must be at least 64"));
    }
    let n = grid_resolution;
    let xs: Vec<f64> = (0..=n * (SAMPLES_PER_CELL - 1)).map(|i| i as f64 / (n * (SAMPLES_PER_CELL - 1)) as f64).collect();
    let mut ys = xs.clone();
    for k in 1..=k_max {
        for y in ys.iter_mut() {
            *y = f.eval(*y);
        }
        // per-cell extremes
        let per = SAMPLES_PER_CELL - 1;
        let mut lo = vec![(f64::INFINITY, 0.0); n];
        let mut hi = vec![(f64::NEG_INFINITY, 0.0); n];
        for c in 0..n {
            for s in c * per..=(c + 1) * per {
                if ys[s] < lo[c].0 {
                    lo[c] = (ys[s], xs[s]);
                }
                if ys[s] > hi[c].0 {
                    hi[c] = (ys[s], xs[s]);
                }
            }
        }
        let lower = |i: usize, j: usize| lo[i].0 < lo[j].0;
        let higher = |i: usize, j: usize| hi[i].0 > hi[j].0;
        let min_t = SparseTable::new(n, &lower);
        let max_t = SparseTable::new(n, &higher);
        let covers = |a: usize, b: usize, left: f64, right: f64| {
            lo[min_t.query(a, b, &lower)].0 <= left + COVER_TOLERANCE
                && hi[max_t.query(a, b, &higher)].0 >= right - COVER_TOLERANCE
        };
        for a in 0..n {
            for d in (a + 2..=n).rev() {
                let (left, right) = (a as f64 / n as f64, d as f64 / n as f64);
                // covering by [a, b) is monotone in b
                if !covers(a, d - 1, left, right) {
                    continue;
                }
                let (mut l, mut r) = (a + 1, d - 1);
                while l < r {
                    let m = (l + r) / 2;
                    if covers(a, m, left, right) {
                        r = m;
                    } else {
                        l = m + 1;
                    }
                }
                let b = l;
                for start in [b + 1, b] {
                    if start < d && covers(start, d, left, right) {
                        let intervals = vec![(left, b as f64 / n as f64), (start as f64 / n as f64, right)];
                        let h = Horseshoe::certify(f, k, intervals, 64 * SAMPLES_PER_CELL)?;
                        if h.is_certified() {
                            return Ok(Some(h));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}
