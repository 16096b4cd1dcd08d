use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{Distance, DynamicalSystem, PointSpace};
use crate::error::{Error, Result};

/// A continuous self-map of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum IntervalMap1D {
    /// `λ·x·(1 − x)` with `λ ∈ [0, 4]`.
    Logistic(f64),
    /// `s·min(x, 1 − x)` with slope `s ∈ (0, 2]`; slope 2 is the full tent `τ`.
    Tent(f64),
    /// Linear interpolation through `(x, y)` breakpoints spanning `[0, 1]`.
    PiecewiseLinear(Vec<(f64, f64)>),
}

impl IntervalMap1D {
    pub fn logistic(lambda: f64) -> Result<Self> {
        if !(0.0..=4.0).contains(&lambda) {
            return Err(Error::arg(format!("logistic parameter {lambda} outside [0, 4]")));
        }
        Ok(IntervalMap1D::Logistic(lambda))
    }

    pub fn tent(slope: f64) -> Result<Self> {
        if !(slope > 0.0 && slope <= 2.0) {
            return Err(Error::arg(format!("tent slope {slope} outside (0, 2]")));
        }
        Ok(IntervalMap1D::Tent(slope))
    }

    pub fn piecewise_linear(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::arg("piecewise-linear map needs at least two breakpoints"));
        }
        if breakpoints[0].0 != 0.0 || breakpoints[breakpoints.len() - 1].0 != 1.0 {
            return Err(Error::arg("breakpoints must start at x = 0 and end at x = 1"));
        }
        if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::arg("breakpoint abscissae must be strictly increasing"));
        }
        if breakpoints.iter().any(|&(_, y)| !(0.0..=1.0).contains(&y)) {
            return Err(Error::arg("breakpoint values must lie in [0, 1]"));
        }
        Ok(IntervalMap1D::PiecewiseLinear(breakpoints))
    }

    pub fn identity() -> Self {
        IntervalMap1D::PiecewiseLinear(vec![(0.0, 0.0), (1.0, 1.0)])
    }

    /// Evaluates the map without range checks.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            IntervalMap1D::Logistic(l) => l * x * (1.0 - x),
            IntervalMap1D::Tent(s) => s * x.min(1.0 - x),
            IntervalMap1D::PiecewiseLinear(bp) => {
                let i = bp.partition_point(|&(bx, _)| bx <= x).clamp(1, bp.len() - 1);
                let (x0, y0) = bp[i - 1];
                let (x1, y1) = bp[i];
                if x == x1 {
                    return y1;
                }
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// `f^k(x)` without range checks.
    pub fn eval_iter(&self, mut x: f64, k: usize) -> f64 {
        for _ in 0..k {
            x = self.eval(x);
        }
        x
    }

    pub fn apply(&self, x: f64, index: usize) -> Result<f64> {
        let y = self.eval(x);
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::Escape { index, value: y });
        }
        Ok(y)
    }
}

impl fmt::Display for IntervalMap1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalMap1D::Logistic(l) => write!(f, "logistic:{l}"),
            IntervalMap1D::Tent(s) => write!(f, "tent:{s}"),
            IntervalMap1D::PiecewiseLinear(bp) => {
                write!(f, "pwl:")?;
                for (i, (x, y)) in bp.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{x},{y}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `logistic:<λ>`, `tent:<slope>`, `pwl:<x>,<y>;<x>,<y>;...` or `identity`.
impl FromStr for IntervalMap1D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |v: &str| {
            v.trim().parse::<f64>().map_err(|_| Error::arg(format!("bad number '{v}' in map spec '{s}'")))
        };
        match s.split_once(':') {
            Some(("logistic", v)) => IntervalMap1D::logistic(num(v)?),
            Some(("tent", v)) => IntervalMap1D::tent(num(v)?),
            Some(("pwl", v)) => {
                let mut bp = Vec::new();
                for pair in v.split(';') {
                    let (x, y) = pair
                        .split_once(',')
                        .ok_or_else(|| Error::arg(format!("breakpoint '{pair}' is not 'x,y'")))?;
                    bp.push((num(x)?, num(y)?));
                }
                IntervalMap1D::piecewise_linear(bp)
            }
            None if s == "identity" => Ok(IntervalMap1D::identity()),
            _ => Err(Error::arg(format!("unknown interval map '{s}'"))),
        }
    }
}

impl DynamicalSystem for IntervalMap1D {
    type State = f64;

    fn space(&self) -> PointSpace {
        PointSpace::INTERVAL
    }

    fn id(&self) -> String {
        self.to_string()
    }

    fn check_state(&self, x: &f64) -> Result<()> {
        if !(0.0..=1.0).contains(x) {
            return Err(Error::Escape { index: 0, value: *x });
        }
        Ok(())
    }

    fn step(&self, x: &f64, index: usize) -> Result<f64> {
        self.apply(*x, index)
    }

    fn distance(&self, a: &f64, b: &f64) -> Distance {
        Distance::Real((a - b).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::orbit;

    #[test]
    fn tent_orbit_of_one_half() {
        let o = orbit(&IntervalMap1D::Tent(2.0), &0.5, 2).unwrap();
        assert_eq!(o.points, vec![0.5, 1.0, 0.0]);
    }

    #[test]
    fn identity_orbit_repeats() {
        let o = orbit(&IntervalMap1D::identity(), &0.37, 5).unwrap();
        assert_eq!(o.points, vec![0.37; 6]);
    }

    #[test]
    fn logistic_orbit_matches_hand_evaluation() {
        let o = orbit(&IntervalMap1D::Logistic(4.0), &0.3, 3).unwrap();
        let mut x = 0.3f64;
        for p in &o.points[1..] {
            x = 4.0 * x * (1.0 - x);
            assert_eq!(*p, x);
        }
        assert!((o.points[1] - 0.84).abs() < 1e-15);
    }

    #[test]
    fn escape_names_first_bad_index() {
        let f = IntervalMap1D::PiecewiseLinear(vec![(0.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(f.check_state(&1.5), Err(Error::Escape { .. })));
        let bad = IntervalMap1D::Logistic(4.5);
        match orbit(&bad, &0.5, 3) {
            Err(Error::Escape { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["logistic:4", "tent:2", "pwl:0,0;0.5,1;1,0"] {
            let f: IntervalMap1D = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert_eq!("identity".parse::<IntervalMap1D>().unwrap(), IntervalMap1D::identity());
        assert!("tent:3".parse::<IntervalMap1D>().is_err());
    }
}
