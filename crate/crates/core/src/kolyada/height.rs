use serde::{Deserialize, Serialize};

use super::feigenbaum::DyadicIntervalSystem;
use super::nseq::NSequence;
use crate::error::{Error, Result};

/// The set `J^n_{2^{n-1}}` on whose `Q`-points the fiber map is `τ / 2^{i-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub left: f64,
    pub right: f64,
    pub level: usize,
    pub index: usize,
    pub height: f64,
}

/// Piecewise-linear fiber height `h` on `[0, 1]`.
///
/// Every depth-`D` leaf `J^D_k`, `k ≠ 0`, lies in exactly one plateau set and carries
/// its height. The leaf `J^D_0` around the critical point is resolved further with the
/// leaves of levels `D+1..N`, and `h` falls linearly to 0 at `1/2` inside `J^N_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightField {
    pub depth: usize,
    pub knots: Vec<(f64, f64)>,
    pub plateaus: Vec<Plateau>,
    pub zero_anchors: Vec<f64>,
    /// `J^D_0`, where the field is refined past depth `D`.
    pub core: (f64, f64),
    /// `J^N_0`, the region left to interpolation.
    pub unresolved: (f64, f64),
}

impl HeightField {
    pub fn eval(&self, x: f64) -> f64 {
        let k = &self.knots;
        let i = k.partition_point(|&(kx, _)| kx <= x);
        if i == 0 {
            return k[0].1;
        }
        if i == k.len() {
            return k[i - 1].1;
        }
        let ((x0, h0), (x1, h1)) = (k[i - 1], k[i]);
        if h0 == h1 {
            return h0;
        }
        h0 + (h1 - h0) * (x - x0) / (x1 - x0)
    }

    /// Largest `|h(x) − h(x')| / |x − x'|` over consecutive knots.
    pub fn max_slope(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).abs() / (w[1].0 - w[0].0))
            .fold(0.0, f64::max)
    }

    /// The plateau whose leaves contain `x`, if any.
    pub fn plateau_of(&self, x: f64) -> Option<&Plateau> {
        self.plateaus.iter().find(|p| p.left <= x && x <= p.right)
    }
}

fn leaf_level(k: usize) -> usize {
    k.trailing_zeros() as usize + 1
}

pub fn build_height_field(system: &DyadicIntervalSystem, nseq: &NSequence, depth: usize) -> Result<HeightField> {
    let top = system.max_level;
    if depth == 0 || depth > top {
        return Err(Error::arg(format!("depth {depth} must lie in 1..={top}")));
    }
    let height_of = |n: usize| {
        let index = nseq.index_of_level(n);
        (index, 2f64.powi(1 - index as i32))
    };
    let mut plateaus = Vec::new();
    for n in 1..=top {
        let (left, right) = system.interval(n, 1 << (n - 1));
        let (index, height) = height_of(n);
        plateaus.push(Plateau { left, right, level: n, index, height });
    }
    let mut knots = Vec::new();
    for k in 1..(1usize << depth) {
        let (a, b) = system.interval(depth, k);
        let h = plateaus[leaf_level(k) - 1].height;
        knots.push((a, h));
        knots.push((b, h));
    }
    let stride = 1usize << depth;
    for k in (stride..(1usize << top)).step_by(stride) {
        let (a, b) = system.interval(top, k);
        let h = plateaus[leaf_level(k) - 1].height;
        knots.push((a, h));
        knots.push((b, h));
    }
    let mut zero_anchors = vec![0.0, 0.5, 1.0];
    zero_anchors.extend(system.gap_periodic_points(depth)?);
    knots.extend(zero_anchors.iter().map(|&x| (x, 0.0)));
    knots.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in knots.windows(2) {
        if !(w[0].0 < w[1].0) && !(w[0].0 == w[1].0 && w[0].1 == w[1].1) {
            return Err(Error::Construction(format!("overlapping height assignments at x = {}", w[0].0)));
        }
    }
    knots.dedup();
    for &x in &zero_anchors {
        if x != 0.5 && system.level(depth).iter().any(|&(a, b)| a <= x && x <= b) {
            return Err(Error::Construction(format!("zero anchor {x} falls inside a depth-{depth} leaf")));
        }
    }
    plateaus.truncate(depth);
    Ok(HeightField {
        depth,
        knots,
        plateaus,
        zero_anchors,
        core: system.interval(depth, 0),
        unresolved: system.interval(top, 0),
    })
}
