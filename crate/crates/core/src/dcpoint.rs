//! DCi-point claims: a point `x0`, a radius `ε`, a closed envelope `A`, a return
//! iterate `n` and a finite scrambled sample `S`, checked for
//! `S ⊆ A ⊆ Fⁿ(A) ⊆ B(x0, ε)` plus pairwise DCi evidence on `S`.
//!
//! Balls are open: `B(x0, ε) = {x : d(x, x0) < ε}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dynamics::{classify_pair, psi_profile, DcClass, DynamicalSystem, HorizonWindow, PairClassification};
use crate::error::{Error, Result};
use crate::parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exact,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub mode: CheckMode,
    /// Signed slack of the inclusion (negative when it fails); absent for exact checks.
    pub margin: Option<f64>,
    pub detail: String,
    /// A point or object contradicting the inclusion.
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn exact(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), pass, mode: CheckMode::Exact, margin: None, detail: detail.into(), witness: None }
    }

    pub fn numeric(name: &str, margin: f64, required: f64, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            pass: margin >= required,
            mode: CheckMode::Numeric,
            margin: Some(margin),
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

/// Smallest margin a numeric inclusion must clear.
pub const NUMERIC_MARGIN: f64 = 1e-9;

pub const CHECK_S_IN_A: &str = "S-in-A";
pub const CHECK_A_IN_IMAGE: &str = "A-in-image";
pub const CHECK_IMAGE_IN_BALL: &str = "image-in-ball";
pub const CHECK_SCRAMBLED: &str = "scrambled-evidence";

/// A system whose points can carry DCi-point claims.
pub trait ClaimSpace: DynamicalSystem {
    type Envelope: fmt::Display + Clone + Sync;

    fn space_id(&self) -> &'static str;

    fn label(&self, x: &Self::State) -> String;

    /// `S ⊆ A`.
    fn check_members(&self, envelope: &Self::Envelope, members: &[Self::State]) -> Result<CheckResult>;

    /// `A ⊆ Fⁿ(A)`.
    fn check_envelope_in_image(&self, envelope: &Self::Envelope, n: usize) -> Result<CheckResult>;

    /// `Fⁿ(A) ⊆ B(x0, ε)`.
    fn check_image_in_ball(
        &self,
        envelope: &Self::Envelope,
        n: usize,
        x0: &Self::State,
        epsilon: f64,
    ) -> Result<CheckResult>;
}

/// Threshold grid, horizon schedule and window used for the scrambled-set statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticsPlan {
    pub t_grid: Vec<f64>,
    pub horizons: Vec<usize>,
    pub window: HorizonWindow,
}

#[derive(Debug, Clone)]
pub struct DcPointClaim<S: ClaimSpace> {
    pub x0: S::State,
    pub epsilon: f64,
    /// Claimed class: DC1, DC2 or DC3.
    pub class: DcClass,
    pub scrambled: Vec<S::State>,
    pub envelope: S::Envelope,
    pub return_iterate: usize,
    pub plan: StatisticsPlan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub x: String,
    pub y: String,
    pub classification: PairClassification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcPointCertificate {
    pub space: String,
    pub x0: String,
    pub epsilon: f64,
    pub class: DcClass,
    pub envelope: String,
    pub return_iterate: usize,
    /// `S-in-A`, `A-in-image`, `image-in-ball`, `scrambled-evidence`, in that order.
    pub checks: Vec<CheckResult>,
    pub pairs: Vec<PairReport>,
    pub mode: CheckMode,
    pub pass: bool,
}

impl DcPointCertificate {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

pub fn verify_claim<S: ClaimSpace>(system: &S, claim: &DcPointClaim<S>, delta: f64) -> Result<DcPointCertificate> {
    if claim.return_iterate == 0 {
        return Err(Error::arg("return iterate must be at least 1"));
    }
    if !(claim.epsilon > 0.0) {
        return Err(Error::arg("epsilon must be positive"));
    }
    if claim.class == DcClass::None {
        return Err(Error::arg("claimed class must be DC1, DC2 or DC3"));
    }
    let mut checks = vec![
        system.check_members(&claim.envelope, &claim.scrambled)?,
        system.check_envelope_in_image(&claim.envelope, claim.return_iterate)?,
        system.check_image_in_ball(&claim.envelope, claim.return_iterate, &claim.x0, claim.epsilon)?,
    ];

    let n = claim.scrambled.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let pairs = parallel::try_par_map(&pairs, |&(i, j)| -> Result<PairReport> {
        let (x, y) = (&claim.scrambled[i], &claim.scrambled[j]);
        let profile = psi_profile(system, x, y, &claim.plan.t_grid, &claim.plan.horizons)?;
        let classification = classify_pair(&profile, delta, claim.plan.window)?;
        Ok(PairReport { x: system.label(x), y: system.label(y), classification })
    })?;
    let weakest = pairs.iter().map(|p| p.classification.verdict).min();
    let scrambled_ok = n >= 2 && weakest.is_some_and(|v| v >= claim.class);
    let mut scrambled = CheckResult {
        name: CHECK_SCRAMBLED.into(),
        pass: scrambled_ok,
        mode: CheckMode::Exact,
        margin: None,
        detail: format!(
            "{} pairs, weakest verdict {} (evidence at horizon {}, delta {delta})",
            pairs.len(),
            weakest.unwrap_or(DcClass::None).label(),
            claim.plan.horizons.last().copied().unwrap_or(0)
        ),
        witness: None,
    };
    if let Some(p) = pairs.iter().find(|p| p.classification.verdict < claim.class) {
        scrambled.witness = Some(format!("({}, {})", p.x, p.y));
    }
    checks.push(scrambled);

    let mode = if checks.iter().all(|c| c.mode == CheckMode::Exact) { CheckMode::Exact } else { CheckMode::Numeric };
    let pass = checks.iter().all(|c| c.pass);
    Ok(DcPointCertificate {
        space: system.space_id().into(),
        x0: system.label(&claim.x0),
        epsilon: claim.epsilon,
        class: claim.class,
        envelope: claim.envelope.to_string(),
        return_iterate: claim.return_iterate,
        checks,
        pairs,
        mode,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallMembership {
    pub inside: bool,
    /// `ε − d(x, x0)`.
    pub margin: f64,
}

/// `d(x, x0) < ε`; exact for the shift space.
pub fn ball_membership<D: DynamicalSystem + ?Sized>(
    system: &D,
    x0: &D::State,
    epsilon: f64,
    x: &D::State,
) -> Result<BallMembership> {
    let d = system.distance(x0, x);
    Ok(BallMembership { inside: d.less_than(epsilon)?, margin: epsilon - d.value() })
}
