//! DC1/DC2/DC3 verdicts from a finite-horizon profile.
//!
//! With tolerance `δ` the predicates over the profile's t-grid are
//!
//! * DC1: `Ψ* ≥ 1 − δ` at every grid `t`, and `Ψ ≤ δ` at some grid `t`;
//! * DC2: `Ψ* ≥ 1 − δ` at every grid `t`, and `Ψ* − Ψ ≥ δ` at some grid `t`;
//! * DC3: `Ψ* − Ψ ≥ δ` at some grid `t`.
//!
//! The classes are nested (a DC1 pair is a DC2 pair, a DC2 pair is a DC3 pair),
//! so each weaker predicate also accepts the evidence of the stronger ones.
//! Every verdict is evidence at a finite horizon, never a proof about the limits.

use serde::{Deserialize, Serialize};

use super::stats::{psi_bounds, DistributionalProfile, HorizonWindow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DcClass {
    None,
    Dc3,
    Dc2,
    Dc1,
}

impl DcClass {
    pub fn label(self) -> &'static str {
        match self {
            DcClass::None => "none",
            DcClass::Dc3 => "DC3",
            DcClass::Dc2 => "DC2",
            DcClass::Dc1 => "DC1",
        }
    }
}

/// Lower and upper estimates at one grid threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Which predicates held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub dc1: bool,
    pub dc2: bool,
    pub dc3: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairClassification {
    pub verdict: DcClass,
    pub delta: f64,
    /// Largest horizon the estimates are based on.
    pub horizon: usize,
    /// Horizons actually used for the lower/upper estimates.
    pub window: (usize, usize),
    pub evidence: Evidence,
    pub witnesses: Vec<Witness>,
}

impl PairClassification {
    pub fn summary(&self) -> String {
        format!(
            "{} (evidence at horizon {}, delta {})",
            self.verdict.label(),
            self.horizon,
            self.delta
        )
    }

    /// Smallest lower estimate over the grid.
    pub fn min_lower(&self) -> f64 {
        self.witnesses.iter().map(|w| w.lower).fold(f64::INFINITY, f64::min)
    }

    /// Smallest upper estimate over the grid.
    pub fn min_upper(&self) -> f64 {
        self.witnesses.iter().map(|w| w.upper).fold(f64::INFINITY, f64::min)
    }
}

pub fn classify_pair(
    profile: &DistributionalProfile,
    delta: f64,
    window: HorizonWindow,
) -> Result<PairClassification> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::arg(format!("delta must lie in (0, 1/2), got {delta}")));
    }
    let mut witnesses = Vec::with_capacity(profile.t_grid.len());
    let mut used = (usize::MAX, 0);
    for &t in &profile.t_grid {
        let b = psi_bounds(profile, t, window)?;
        used = (used.0.min(b.window.0), used.1.max(b.window.1));
        witnesses.push(Witness { t, lower: b.lower, upper: b.upper });
    }
    let upper_full = witnesses.iter().all(|w| w.upper >= 1.0 - delta);
    let gap = witnesses.iter().any(|w| w.upper - w.lower >= delta);
    let dc1 = upper_full && witnesses.iter().any(|w| w.lower <= delta);
    let dc2 = dc1 || (upper_full && gap);
    let dc3 = dc2 || gap;
    let verdict = if dc1 {
        DcClass::Dc1
    } else if dc2 {
        DcClass::Dc2
    } else if dc3 {
        DcClass::Dc3
    } else {
        DcClass::None
    };
    Ok(PairClassification {
        verdict,
        delta,
        horizon: profile.horizon(),
        window: used,
        evidence: Evidence { dc1, dc2, dc3 },
        witnesses,
    })
}
