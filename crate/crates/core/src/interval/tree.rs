use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::horseshoe::Horseshoe;
use super::map::IntervalMap1D;
use crate::error::{Error, Result};
use crate::symbolic::{word_string, Word};

/// Bisection stops once endpoint brackets are this narrow.
pub const ENDPOINT_TOLERANCE: f64 = 1e-12;
const NODE_SAMPLES: usize = 4096;
/// Touching siblings whose bisected endpoints overlap by at most this are snapped
/// to a common endpoint.
const SIBLING_SNAP: f64 = 1e-9;

/// Intervals `J_w` for binary words `|w| ≤ D`, with `g = f^k` mapping `J_{bw}`
/// onto (a superset of) `J_w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedIntervalTree {
    pub map: IntervalMap1D,
    pub k: usize,
    pub depth: usize,
    /// `levels[L−1][v]` is `J_w` for the length-`L` word `w` with binary value `v`.
    levels: Vec<Vec<(f64, f64)>>,
}

fn word_index(w: &[u8]) -> usize {
    w.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

fn index_word(mut v: usize, len: usize) -> Word {
    let mut w = vec![0; len];
    for i in (0..len).rev() {
        w[i] = (v & 1) as u8;
        v >>= 1;
    }
    w
}

impl NestedIntervalTree {
    pub fn interval(&self, w: &[u8]) -> Result<(f64, f64)> {
        if w.is_empty() || w.len() > self.depth || w.iter().any(|&b| b > 1) {
            return Err(Error::arg(format!("word '{}' is not a node of a depth-{} tree", word_string(w), self.depth)));
        }
        Ok(self.levels[w.len() - 1][word_index(w)])
    }

    /// All nodes of one level as `(word, interval)`.
    pub fn level(&self, len: usize) -> Vec<(Word, (f64, f64))> {
        self.levels[len - 1].iter().enumerate().map(|(v, &j)| (index_word(v, len), j)).collect()
    }

    /// Largest interval width at the deepest level.
    pub fn residual_width(&self) -> f64 {
        self.levels[self.depth - 1].iter().map(|(a, b)| b - a).fold(0.0, f64::max)
    }

    pub fn max_width(&self, len: usize) -> f64 {
        self.levels[len - 1].iter().map(|(a, b)| b - a).fold(0.0, f64::max)
    }

    pub fn min_width(&self, len: usize) -> f64 {
        self.levels[len - 1].iter().map(|(a, b)| b - a).fold(f64::INFINITY, f64::min)
    }

    /// Address of `x` down to `len` symbols, or `None` if `x` leaves the tree.
    /// On a shared endpoint the child `0` is preferred.
    pub fn itinerary(&self, x: f64, len: usize) -> Option<Word> {
        let mut w = Vec::with_capacity(len);
        for l in 1..=len.min(self.depth) {
            let base = word_index(&w) << 1;
            let level = &self.levels[l - 1];
            let b = (0..2).find(|&b| {
                let (a, c) = level[base | b];
                a <= x && x <= c
            })?;
            w.push(b as u8);
        }
        Some(w)
    }

    /// CSV `word,left,right`, level by level.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("word,left,right\n");
        for len in 1..=self.depth {
            for (w, (a, b)) in self.level(len) {
                let _ = writeln!(out, "{},{a:.16e},{b:.16e}", word_string(&w));
            }
        }
        out
    }
}

/// Builds `J_{wb}` as the shortest subinterval of `J_w` whose `g`-image covers
/// `J_{tail(w) b}` (`J_b` at the first refinement), from dense sampling of `g` on
/// `J_w` followed by endpoint bisection.
pub fn refine_tree(f: &IntervalMap1D, h: &Horseshoe, depth: usize) -> Result<NestedIntervalTree> {
    if depth == 0 {
        return Err(Error::arg("tree depth must be at least 1"));
    }
    if h.s() != 2 {
        return Err(Error::arg("tree refinement needs a 2-horseshoe"));
    }
    let mut levels = vec![h.intervals.clone()];
    for len in 1..depth {
        let prev = &levels[len - 1];
        let mut next = Vec::with_capacity(prev.len() * 2);
        for (v, &parent) in prev.iter().enumerate() {
            let w = index_word(v, len);
            for b in 0..2u8 {
                let mut target_word = w[1..].to_vec();
                target_word.push(b);
                let target = levels[target_word.len() - 1][word_index(&target_word)];
                let mut node = w.clone();
                node.push(b);
                next.push(covering_subinterval(f, h.k, parent, target).map_err(|reason| Error::Refinement {
                    node: word_string(&node),
                    reason,
                })?);
            }
        }
        for (v, pair) in next.chunks_mut(2).enumerate() {
            let (l, r) = if pair[0].0 <= pair[1].0 { (0, 1) } else { (1, 0) };
            let overlap = pair[l].1 - pair[r].0;
            if overlap > SIBLING_SNAP {
                return Err(Error::Refinement {
                    node: word_string(&index_word(v, len)),
                    reason: format!(
                        "children [{}, {}] and [{}, {}] overlap",
                        pair[0].0, pair[0].1, pair[1].0, pair[1].1
                    ),
                });
            }
            if overlap > 0.0 {
                // independently bisected endpoints of touching siblings
                let mid = 0.5 * (pair[l].1 + pair[r].0);
                pair[l].1 = mid;
                pair[r].0 = mid;
            }
        }
        levels.push(next);
    }
    Ok(NestedIntervalTree { map: f.clone(), k: h.k, depth, levels })
}

fn covering_subinterval(
    f: &IntervalMap1D,
    k: usize,
    (a, b): (f64, f64),
    (lo, hi): (f64, f64),
) -> std::result::Result<(f64, f64), String> {
    let g = |x: f64| f.eval_iter(x, k);
    let xs: Vec<f64> = (0..=NODE_SAMPLES)
        .map(|i| if i == NODE_SAMPLES { b } else { a + (b - a) * i as f64 / NODE_SAMPLES as f64 })
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let is_low = |y: f64| y <= lo + ENDPOINT_TOLERANCE;
    let is_high = |y: f64| y >= hi - ENDPOINT_TOLERANCE;

    // shortest sample span whose ends are one low and one high
    let mut best: Option<(usize, usize)> = None;
    let (mut last_low, mut last_high) = (None, None);
    for j in 0..xs.len() {
        let (l, h) = (is_low(ys[j]), is_high(ys[j]));
        for start in [if h { last_low } else { None }, if l { last_high } else { None }].into_iter().flatten() {
            if best.is_none_or(|(i0, j0)| j - start < j0 - i0) {
                best = Some((start, j));
            }
        }
        if l {
            last_low = Some(j);
        }
        if h {
            last_high = Some(j);
        }
        if l && h {
            best = Some((j, j));
        }
    }
    let (i, j) = best.ok_or_else(|| format!("g([{a}, {b}]) does not reach both ends of [{lo}, {hi}]"))?;
    if i == j {
        return Err(format!("target [{lo}, {hi}] is degenerate"));
    }
    // tighten each end towards the other across one sample cell
    let left_low = is_low(ys[i]);
    let (left_target, right_target) = if left_low { (lo, hi) } else { (hi, lo) };
    let left = tighten(&g, xs[i], xs[i + 1], left_low, left_target);
    let right = tighten(&g, xs[j], xs[j - 1], !left_low, right_target);
    Ok((left, right))
}

/// Moves `from` towards `toward` while `g` stays at or beyond `target` (below it
/// when `below`).
fn tighten(g: &impl Fn(f64) -> f64, from: f64, toward: f64, below: bool, target: f64) -> f64 {
    let past = |y: f64| if below { y <= target } else { y >= target };
    if past(g(toward)) {
        return toward;
    }
    let (mut inside, mut outside) = (from, toward);
    while (outside - inside).abs() > ENDPOINT_TOLERANCE {
        let mid = 0.5 * (inside + outside);
        if past(g(mid)) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}
