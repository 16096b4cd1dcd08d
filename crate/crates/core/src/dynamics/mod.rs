//! Dynamical-system abstraction and the distributional-chaos statistics engine.

mod classify;
mod stats;
mod subsample;

pub use classify::{classify_pair, DcClass, Evidence, PairClassification, Witness};
pub use stats::{
    default_t_grid, geometric_horizons, psi_bounds, psi_n, psi_profile, xi_count,
    DistributionalProfile, HorizonWindow, PsiBounds,
};
pub use subsample::{subsample_check, SubsampleReport};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kind of phase space a system lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    Interval1d,
    Square2d,
    ShiftBinary,
}

/// Metric attached to a [`SpaceKind`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Euclidean1d,
    Max2d,
    /// `d(x, y) = 1/i` with `i` the first (1-based) position where `x` and `y` differ.
    ShiftReciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSpace {
    pub kind: SpaceKind,
    pub metric: MetricKind,
}

impl PointSpace {
    pub const INTERVAL: PointSpace =
        PointSpace { kind: SpaceKind::Interval1d, metric: MetricKind::Euclidean1d };
    pub const SQUARE: PointSpace = PointSpace { kind: SpaceKind::Square2d, metric: MetricKind::Max2d };
    pub const SHIFT: PointSpace =
        PointSpace { kind: SpaceKind::ShiftBinary, metric: MetricKind::ShiftReciprocal };
}

/// A distance value. Real-valued spaces carry an `f64`; the shift space carries
/// the exact reciprocal form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distance {
    Real(f64),
    /// The points are equal.
    Zero,
    /// `1/i`, first difference at position `i ≥ 1`.
    Reciprocal(u64),
    /// The points agree on at least the first `depth` positions; no difference
    /// was found within the evaluation depth. The distance is at most `1/(depth+1)`.
    Below(u64),
}

impl Distance {
    /// Decides `d < t`. Undecidable comparisons for [`Distance::Below`] are an error.
    pub fn less_than(&self, t: f64) -> Result<bool> {
        if !(t > 0.0) {
            return Ok(false);
        }
        Ok(match *self {
            Distance::Real(d) => d < t,
            Distance::Zero => true,
            Distance::Reciprocal(i) => reciprocal_less_than(i, t),
            Distance::Below(depth) => {
                if reciprocal_less_than(depth.saturating_add(1), t) {
                    true
                } else {
                    return Err(Error::Unresolved { depth, threshold: t });
                }
            }
        })
    }

    /// Numeric value (upper bound for [`Distance::Below`]).
    pub fn value(&self) -> f64 {
        match *self {
            Distance::Real(d) => d,
            Distance::Zero => 0.0,
            Distance::Reciprocal(i) => 1.0 / i as f64,
            Distance::Below(depth) => 1.0 / (depth as f64 + 1.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Distance::Zero) || matches!(self, Distance::Real(d) if *d == 0.0)
    }
}

/// Exact test of `1/i < t` for a double `t`.
pub fn reciprocal_less_than(i: u64, t: f64) -> bool {
    if i == 0 || !(t > 0.0) {
        return false;
    }
    if t > 1.0 {
        return true;
    }
    // t = mantissa * 2^exp, and exp < 0 because t ≤ 1
    let (mantissa, exp) = decompose(t);
    let shift = (-exp) as u32;
    if shift >= 127 {
        return false;
    }
    (i as u128) * (mantissa as u128) > 1u128 << shift
}

/// Splits a positive finite double into `mantissa * 2^exp` with an integer mantissa.
fn decompose(t: f64) -> (u64, i32) {
    let bits = t.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    }
}

/// A deterministic discrete dynamical system `f: X → X` on a metric space.
pub trait DynamicalSystem: Sync {
    type State: Clone + fmt::Debug + Send + Sync;

    fn space(&self) -> PointSpace;

    /// Short identifier used to tag orbits and reports.
    fn id(&self) -> String;

    /// Validates that `x` belongs to the phase space.
    fn check_state(&self, _x: &Self::State) -> Result<()> {
        Ok(())
    }

    /// One application of the map. `index` is the position of `x` in the orbit and
    /// is only used for error reporting.
    fn step(&self, x: &Self::State, index: usize) -> Result<Self::State>;

    fn distance(&self, a: &Self::State, b: &Self::State) -> Distance;

    /// Streams `d(fʲx, fʲy)` for `j = 0..n` into `sink`.
    ///
    /// The default walks both orbits; systems with cheaper pair structure
    /// (the shift) override it.
    fn for_each_pair_distance(
        &self,
        x: &Self::State,
        y: &Self::State,
        n: usize,
        sink: &mut dyn FnMut(usize, Distance) -> Result<()>,
    ) -> Result<()> {
        self.check_state(x)?;
        self.check_state(y)?;
        let mut a = x.clone();
        let mut b = y.clone();
        for j in 0..n {
            sink(j, self.distance(&a, &b))?;
            if j + 1 < n {
                a = self.step(&a, j)?;
                b = self.step(&b, j)?;
            }
        }
        Ok(())
    }
}

/// Finite orbit segment `x0, f(x0), …, fⁿ(x0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSegment<S> {
    pub points: Vec<S>,
    pub system_id: String,
}

impl<S> OrbitSegment<S> {
    /// Number of steps `n` (the segment holds `n + 1` points).
    pub fn steps(&self) -> usize {
        self.points.len().saturating_sub(1)
    }
}

/// Computes `x0, f(x0), …, fⁿ(x0)`.
pub fn orbit<D: DynamicalSystem + ?Sized>(
    system: &D,
    x0: &D::State,
    n: usize,
) -> Result<OrbitSegment<D::State>> {
    system.check_state(x0)?;
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0.clone());
    for j in 0..n {
        let next = system.step(&points[j], j + 1)?;
        points.push(next);
    }
    Ok(OrbitSegment { points, system_id: system.id() })
}
