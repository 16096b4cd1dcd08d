use std::fmt;
use std::sync::Arc;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::height::HeightField;
use crate::dcpoint::{ClaimSpace, CheckResult, CHECK_A_IN_IMAGE, CHECK_IMAGE_IN_BALL, CHECK_S_IN_A, NUMERIC_MARGIN};
use crate::dynamics::{Distance, DynamicalSystem, PointSpace};
use crate::error::{Error, Result};
use crate::interval::IntervalMap1D;

/// `F(x, y) = (f(x), h(x)·τ(y))` with `τ` the full tent map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangularMapSpec {
    pub base: IntervalMap1D,
    pub heights: HeightField,
}

pub fn tent(y: f64) -> f64 {
    1.0 - (1.0 - 2.0 * y).abs()
}

impl TriangularMapSpec {
    pub fn new(base: IntervalMap1D, heights: HeightField) -> Self {
        TriangularMapSpec { base, heights }
    }

    pub fn h(&self, x: f64) -> f64 {
        self.heights.eval(x)
    }

    /// Length of `F^n({x} × [0, v0])`, by the fiber recursion.
    pub fn fiber_height(&self, x: f64, v0: f64, n: usize) -> f64 {
        let (mut x, mut v) = (x, v0);
        for _ in 0..n {
            v = self.h(x) * (2.0 * v).min(1.0);
            x = self.base.eval(x);
        }
        v
    }
}

pub fn eval_triangular(spec: &TriangularMapSpec, (x, y): (f64, f64)) -> (f64, f64) {
    (spec.base.eval(x), spec.h(x) * tent(y))
}

const FRACTION_BITS: u32 = 126;
const ONE: u128 = 1 << FRACTION_BITS;
const HALF: u128 = 1 << (FRACTION_BITS - 1);

/// A point of the square whose fiber coordinate is a 126-bit fraction.
///
/// Tent doubling shifts one unknown digit into the lowest place. A generic point
/// draws those digits from a stream keyed by `seed` and the time, so an orbit does
/// not collapse onto `0` after 53 steps the way an `f64` orbit does.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberPoint {
    pub x: f64,
    y: u128,
    pub seed: Option<u64>,
    pub time: u64,
}

impl FiberPoint {
    /// Exact fiber coordinate; no digits are revealed.
    pub fn exact(x: f64, y: f64) -> Self {
        FiberPoint { x, y: to_fixed(y), seed: None, time: 0 }
    }

    /// Fiber coordinate whose digits past the 126th are drawn from `seed`.
    pub fn generic(x: f64, y: f64, seed: u64) -> Self {
        FiberPoint { x, y: to_fixed(y), seed: Some(seed), time: 0 }
    }

    pub fn y(&self) -> f64 {
        self.y as f64 / ONE as f64
    }

    fn next_digit(&self) -> u128 {
        match self.seed {
            None => 0,
            Some(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_word_pos(self.time as u128);
                (rng.next_u32() & 1) as u128
            }
        }
    }
}

impl fmt::Display for FiberPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.12}, {:.12})", self.x, self.y())
    }
}

fn to_fixed(y: f64) -> u128 {
    let y = y.clamp(0.0, 1.0);
    if y == 1.0 {
        return ONE;
    }
    (y * 2f64.powi(FRACTION_BITS as i32)) as u128
}

/// `⌊y·h⌋` for `h ∈ [0, 1]`.
fn scale(y: u128, h: f64) -> u128 {
    if h >= 1.0 {
        return y;
    }
    let bits = h.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        return 0;
    }
    let mant = ((bits & ((1 << 52) - 1)) | (1 << 52)) as u128;
    let shift = (1075 - biased) as u32;
    let (hi, lo) = (y >> 64, y & u64::MAX as u128);
    let (p1, p0) = (hi * mant, lo * mant);
    if shift >= 64 {
        let s = shift - 64;
        if s >= 128 {
            0
        } else {
            (p1 + (p0 >> 64)) >> s
        }
    } else {
        (p1 << (64 - shift)) + (p0 >> shift)
    }
}

/// The triangular map acting on [`FiberPoint`]s, with the max metric.
#[derive(Debug, Clone)]
pub struct TriangularSystem {
    pub spec: Arc<TriangularMapSpec>,
}

impl TriangularSystem {
    pub fn new(spec: Arc<TriangularMapSpec>) -> Self {
        TriangularSystem { spec }
    }
}

impl DynamicalSystem for TriangularSystem {
    type State = FiberPoint;

    fn space(&self) -> PointSpace {
        PointSpace::SQUARE
    }

    fn id(&self) -> String {
        format!("triangular:{}", self.spec.base)
    }

    fn check_state(&self, p: &FiberPoint) -> Result<()> {
        if !(0.0..=1.0).contains(&p.x) || p.y > ONE {
            return Err(Error::arg(format!("{p} is outside the unit square")));
        }
        Ok(())
    }

    fn step(&self, p: &FiberPoint, index: usize) -> Result<FiberPoint> {
        let x = self.spec.base.apply(p.x, index + 1)?;
        let digit = p.next_digit();
        let doubled = if p.y < HALF { 2 * p.y + digit } else { 2 * ONE - 2 * p.y - digit };
        let y = scale(doubled, self.spec.h(p.x));
        Ok(FiberPoint { x, y, seed: p.seed, time: p.time + 1 })
    }

    fn distance(&self, a: &FiberPoint, b: &FiberPoint) -> Distance {
        let dy = a.y.abs_diff(b.y) as f64 / ONE as f64;
        Distance::Real((a.x - b.x).abs().max(dy))
    }
}

/// Candidate envelope `(base samples) × [0, ε]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductEnvelope {
    pub base: Arc<Vec<f64>>,
    pub height: f64,
}

impl ProductEnvelope {
    pub fn new(mut base: Vec<f64>, height: f64) -> Self {
        base.sort_by(f64::total_cmp);
        ProductEnvelope { base: Arc::new(base), height }
    }

    fn span(&self) -> (f64, f64) {
        (self.base.first().copied().unwrap_or(f64::NAN), self.base.last().copied().unwrap_or(f64::NAN))
    }

    /// Index of the base sample within `tol` of `x`.
    pub fn locate(&self, x: f64, tol: f64) -> Option<usize> {
        let i = self.base.partition_point(|&b| b < x - tol);
        (i < self.base.len() && self.base[i] <= x + tol).then_some(i)
    }
}

impl fmt::Display for ProductEnvelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.span();
        write!(f, "{} base samples in [{a:.9}, {b:.9}] x [0, {}]", self.base.len(), self.height)
    }
}

/// Base-point matching tolerance for envelope inclusions.
pub const BASE_TOLERANCE: f64 = 1e-9;

impl ClaimSpace for TriangularSystem {
    type Envelope = ProductEnvelope;

    fn space_id(&self) -> &'static str {
        "square-2d"
    }

    fn label(&self, p: &FiberPoint) -> String {
        p.to_string()
    }

    fn check_members(&self, env: &ProductEnvelope, members: &[FiberPoint]) -> Result<CheckResult> {
        let mut margin = f64::INFINITY;
        let mut witness = None;
        for p in members {
            let slack = if env.locate(p.x, BASE_TOLERANCE).is_some() { env.height - p.y() } else { f64::NEG_INFINITY };
            if slack < margin {
                margin = slack;
                witness = Some(p.to_string());
            }
        }
        let mut c = CheckResult::numeric(CHECK_S_IN_A, margin, 0.0, format!("{} members in {env}", members.len()));
        if !c.pass {
            c.witness = witness;
        }
        Ok(c)
    }

    /// Fibers over points that return into the base must regain full height `ε`.
    fn check_envelope_in_image(&self, env: &ProductEnvelope, n: usize) -> Result<CheckResult> {
        let mut margin = f64::INFINITY;
        let mut witness = None;
        let mut returning = 0;
        for &x in env.base.iter() {
            let image = self.spec.base.eval_iter(x, n);
            if env.locate(image, BASE_TOLERANCE).is_none() {
                continue;
            }
            returning += 1;
            let v = self.spec.fiber_height(x, env.height, n);
            if v - env.height < margin {
                margin = v - env.height;
                witness = Some(format!("fiber over {x:.12} shrinks to [0, {v:.6e}] at iterate {n}"));
            }
        }
        if returning == 0 {
            let c = CheckResult::numeric(CHECK_A_IN_IMAGE, -env.height, 0.0, format!("no base sample of {env} returns after {n} iterates"));
            return Ok(c.with_witness(format!("base of F^{n}(A) is disjoint from the base of A")));
        }
        let mut c = CheckResult::numeric(CHECK_A_IN_IMAGE, margin, 0.0, format!("{returning} returning fibers of {env}"));
        if !c.pass {
            c.witness = witness;
        }
        Ok(c)
    }

    fn check_image_in_ball(&self, env: &ProductEnvelope, n: usize, x0: &FiberPoint, epsilon: f64) -> Result<CheckResult> {
        let mut worst = 0.0f64;
        let mut witness = None;
        for &x in env.base.iter() {
            let bx = self.spec.base.eval_iter(x, n);
            let v = self.spec.fiber_height(x, env.height, n);
            let y0 = x0.y();
            let d = (bx - x0.x).abs().max(y0).max((v - y0).abs());
            if d > worst {
                worst = d;
                witness = Some(format!("fiber over {bx:.12} of height {v:.6e}"));
            }
        }
        let mut c = CheckResult::numeric(
            CHECK_IMAGE_IN_BALL,
            epsilon - worst,
            NUMERIC_MARGIN,
            format!("F^{n}(A) within {worst:.6e} of {x0}"),
        );
        if !c.pass {
            c.witness = witness;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_round_trip() {
        for y in [0.0, 1.0, 0.5, 0.3, 1e-20, 0.999999] {
            assert_eq!(FiberPoint::exact(0.5, y).y(), y);
        }
    }

    #[test]
    fn scaling_is_floor_of_product() {
        let y = to_fixed(0.75);
        assert_eq!(scale(y, 0.5), to_fixed(0.375));
        assert_eq!(scale(y, 0.0), 0);
        assert_eq!(scale(ONE, 0.125), to_fixed(0.125));
        assert_eq!(scale(3, 0.5), 1);
    }
}
