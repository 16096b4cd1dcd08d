use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::tree::NestedIntervalTree;
use crate::dcpoint::{
    verify_claim, CheckResult, ClaimSpace, DcPointCertificate, DcPointClaim, StatisticsPlan, CHECK_A_IN_IMAGE,
    CHECK_IMAGE_IN_BALL, CHECK_S_IN_A, NUMERIC_MARGIN,
};
use crate::dynamics::{
    default_t_grid, subsample_check, DcClass, Distance, DynamicalSystem, HorizonWindow, PointSpace, SubsampleReport,
};
use crate::error::{Error, Result};
use crate::parallel;
use crate::symbolic::{ball_depth, psi_transform, word_string, Radius, ScrambledFamily, ShiftPoint, ShiftSystem, Word};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItineraryPoint {
    pub word: String,
    pub x: f64,
    /// Width of `J_w`.
    pub width: f64,
}

/// Approximate `φ⁻¹` images: midpoints of `J_w` for the requested words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiConjugacySample {
    pub points: Vec<ItineraryPoint>,
    /// Largest width at the deepest tree level.
    pub residual_width: f64,
}

pub fn itinerary_points(tree: &NestedIntervalTree, words: &[Word]) -> Result<SemiConjugacySample> {
    let points = words
        .iter()
        .map(|w| {
            let (a, b) = tree.interval(w)?;
            Ok(ItineraryPoint { word: word_string(w), x: 0.5 * (a + b), width: b - a })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SemiConjugacySample { points, residual_width: tree.residual_width() })
}

/// Checks `itinerary(g(x))` against the shifted word of `x`, to one symbol less
/// than the word length; returns the first offending word.
pub fn check_commutation(tree: &NestedIntervalTree, sample: &SemiConjugacySample) -> std::result::Result<(), String> {
    for p in &sample.points {
        let len = p.word.len();
        if len < 2 {
            continue;
        }
        let gx = tree.map.eval_iter(p.x, tree.k);
        let expected = &p.word[1..];
        match tree.itinerary(gx, len - 1) {
            Some(w) if word_string(&w) == expected => {}
            other => {
                return Err(format!(
                    "word {}: g(x) has itinerary {:?}, expected {expected}",
                    p.word,
                    other.map(|w| word_string(&w))
                ))
            }
        }
    }
    Ok(())
}

/// A point of the interval carried by its code: `phase` steps of `f` after the
/// midpoint of the deepest tree interval addressed by `code`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedPoint {
    pub code: ShiftPoint,
    pub phase: usize,
}

/// `f` acting on coded points: `f^k` advances the code by one shift.
///
/// Double-precision orbits of expanding maps lose one bit per step and collapse
/// after a few dozen iterates; carrying the itinerary exactly and re-entering the
/// tree every `k` steps keeps long orbits meaningful, at the price of a position
/// error of at most the residual width of the tree.
#[derive(Debug, Clone)]
pub struct CodedIntervalSystem {
    pub tree: Arc<NestedIntervalTree>,
    leaf_midpoints: Vec<f64>,
}

impl CodedIntervalSystem {
    pub fn new(tree: Arc<NestedIntervalTree>) -> Self {
        let leaf_midpoints = tree.level(tree.depth).iter().map(|(_, (a, b))| 0.5 * (a + b)).collect();
        CodedIntervalSystem { tree, leaf_midpoints }
    }

    pub fn k(&self) -> usize {
        self.tree.k
    }

    pub fn position(&self, p: &CodedPoint) -> Option<f64> {
        let mut idx = 0usize;
        for i in 1..=self.tree.depth as u64 {
            idx = (idx << 1) | p.code.symbol(i)? as usize;
        }
        Some(self.tree.map.eval_iter(self.leaf_midpoints[idx], p.phase))
    }
}

impl DynamicalSystem for CodedIntervalSystem {
    type State = CodedPoint;

    fn space(&self) -> PointSpace {
        PointSpace::INTERVAL
    }

    fn id(&self) -> String {
        format!("coded({}, k={}, depth={})", self.tree.map, self.tree.k, self.tree.depth)
    }

    fn check_state(&self, x: &CodedPoint) -> Result<()> {
        if x.phase >= self.tree.k {
            return Err(Error::arg("coded point phase must be below k"));
        }
        self.position(x).map(|_| ()).ok_or_else(|| Error::arg(format!("code {} is unresolved", x.code)))
    }

    fn step(&self, x: &CodedPoint, _index: usize) -> Result<CodedPoint> {
        Ok(if x.phase + 1 == self.tree.k {
            CodedPoint { code: x.code.shift_by(1), phase: 0 }
        } else {
            CodedPoint { code: x.code.clone(), phase: x.phase + 1 }
        })
    }

    fn distance(&self, a: &CodedPoint, b: &CodedPoint) -> Distance {
        match (self.position(a), self.position(b)) {
            (Some(x), Some(y)) => Distance::Real((x - y).abs()),
            _ => Distance::Real(f64::NAN),
        }
    }
}

/// Closed interval envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalEnvelope {
    pub left: f64,
    pub right: f64,
}

impl fmt::Display for IntervalEnvelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", self.left, self.right)
    }
}

/// Boundary plus interior sample points used by numeric inclusion checks.
const ENVELOPE_SAMPLES: usize = 1000;

impl IntervalEnvelope {
    fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=ENVELOPE_SAMPLES + 1)
            .map(move |i| self.left + (self.right - self.left) * i as f64 / (ENVELOPE_SAMPLES + 1) as f64)
    }
}

impl ClaimSpace for CodedIntervalSystem {
    type Envelope = IntervalEnvelope;

    fn space_id(&self) -> &'static str {
        "interval-1d"
    }

    fn label(&self, x: &CodedPoint) -> String {
        match self.position(x) {
            Some(p) => format!("{} @ {p:.12}", x.code),
            None => x.code.to_string(),
        }
    }

    fn check_members(&self, env: &IntervalEnvelope, members: &[CodedPoint]) -> Result<CheckResult> {
        let mut margin = f64::INFINITY;
        let mut witness = None;
        for m in members {
            let x = self.position(m).unwrap_or(f64::NAN);
            let slack = (x - env.left).min(env.right - x);
            if !(slack >= margin) {
                margin = if slack.is_nan() { f64::NEG_INFINITY } else { slack };
                witness = Some(self.label(m));
            }
        }
        let mut c = CheckResult::numeric(CHECK_S_IN_A, margin, NUMERIC_MARGIN, format!("{} members in {env}", members.len()));
        if !c.pass {
            c.witness = witness;
        }
        Ok(c)
    }

    fn check_envelope_in_image(&self, env: &IntervalEnvelope, n: usize) -> Result<CheckResult> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for x in env.samples() {
            let y = self.tree.map.eval_iter(x, n);
            lo = lo.min(y);
            hi = hi.max(y);
        }
        let margin = (env.left - lo).min(hi - env.right);
        Ok(CheckResult::numeric(
            CHECK_A_IN_IMAGE,
            margin,
            NUMERIC_MARGIN,
            format!("sampled f^{n}(A) spans [{lo:.12}, {hi:.12}]"),
        ))
    }

    fn check_image_in_ball(&self, env: &IntervalEnvelope, n: usize, x0: &CodedPoint, epsilon: f64) -> Result<CheckResult> {
        let c = self.position(x0).ok_or_else(|| Error::arg("x0 is unresolved"))?;
        let mut worst = (0.0f64, c);
        for x in env.samples() {
            let y = self.tree.map.eval_iter(x, n);
            if (y - c).abs() > worst.0 {
                worst = ((y - c).abs(), x);
            }
        }
        let margin = epsilon - worst.0;
        let mut r = CheckResult::numeric(
            CHECK_IMAGE_IN_BALL,
            margin,
            NUMERIC_MARGIN,
            format!("sampled f^{n}(A) stays within {:.12} of x0 = {c:.12}", worst.0),
        );
        if !r.pass {
            r.witness = Some(format!("{}", worst.1));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullbackSettings {
    pub horizon: usize,
    pub delta: f64,
    /// Threshold for the `f` versus `f^k` subsampling report.
    pub subsample_t: f64,
}

impl Default for PullbackSettings {
    fn default() -> Self {
        PullbackSettings { horizon: 10_000, delta: 0.1, subsample_t: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub word: String,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dc1PointReport {
    pub map: String,
    pub k: usize,
    pub depth: usize,
    pub epsilon: String,
    pub x0: f64,
    pub x0_word: String,
    pub residual_width: f64,
    pub certificate: DcPointCertificate,
    /// `J_{ᾱ|1} ⊃ J_{ᾱ|2} ⊃ …` down to the tree depth.
    pub envelope_chain: Vec<ChainLink>,
    pub subsample: Vec<SubsampleReport>,
}

impl Dc1PointReport {
    pub fn all_pairs_dc1(&self) -> bool {
        !self.certificate.pairs.is_empty()
            && self.certificate.pairs.iter().all(|p| p.classification.verdict == DcClass::Dc1)
    }
}

/// Pulls the scrambled sample `ψ_{ᾱ,ε}(S)` back through the tree and checks the
/// DC1-point claim for `x0 = φ⁻¹(ᾱ)` under the full map `f`.
pub fn dc1_point_sample(
    tree: Arc<NestedIntervalTree>,
    alpha: &ShiftPoint,
    family: &ScrambledFamily,
    epsilon: Radius,
    settings: PullbackSettings,
) -> Result<Dc1PointReport> {
    let n = ball_depth(epsilon) as usize;
    if tree.depth < 2 * n {
        return Err(Error::arg(format!("tree depth {} is below 2·m(ε) = {}", tree.depth, 2 * n)));
    }
    let shift = ShiftSystem::default();
    let psi = psi_transform(alpha, epsilon)?;
    let codes = psi.image_family(family);
    for (i, a) in codes.iter().enumerate() {
        for b in &codes[..i] {
            if shift.shift_metric(a, b).is_zero() {
                return Err(Error::arg(format!("pair ({a}, {b}) has identical codes")));
            }
        }
    }
    let system = CodedIntervalSystem::new(tree.clone());
    let k = system.k();
    let x0 = CodedPoint { code: alpha.clone(), phase: 0 };
    let x0_word = alpha.prefix(tree.depth).ok_or_else(|| Error::arg("alpha is unresolved"))?;
    let (left, right) = tree.interval(&psi.prefix())?;
    let scrambled: Vec<CodedPoint> = codes.into_iter().map(|code| CodedPoint { code, phase: 0 }).collect();

    let mut horizons: Vec<usize> = family
        .schedule
        .checkpoints(settings.horizon / k, 2 * n)
        .into_iter()
        .map(|c| c * k)
        .collect();
    if horizons.last() != Some(&settings.horizon) {
        horizons.push(settings.horizon);
    }
    let claim = DcPointClaim {
        x0: x0.clone(),
        epsilon: epsilon.value(),
        class: DcClass::Dc1,
        scrambled: scrambled.clone(),
        envelope: IntervalEnvelope { left, right },
        return_iterate: k * n,
        plan: StatisticsPlan { t_grid: default_t_grid(), horizons, window: HorizonWindow::All },
    };
    let certificate = verify_claim(&system, &claim, settings.delta)?;

    let pairs: Vec<(usize, usize)> = family.pairs();
    let subsample = parallel::try_par_map(&pairs, |&(i, j)| {
        subsample_check(&system, k, &scrambled[i], &scrambled[j], settings.subsample_t, settings.horizon)
    })?;

    let envelope_chain = (1..=tree.depth)
        .map(|l| {
            let (a, b) = tree.interval(&x0_word[..l])?;
            Ok(ChainLink { word: word_string(&x0_word[..l]), left: a, right: b })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dc1PointReport {
        map: tree.map.to_string(),
        k,
        depth: tree.depth,
        epsilon: epsilon.to_string(),
        x0: system.position(&x0).unwrap(),
        x0_word: word_string(&x0_word),
        residual_width: tree.residual_width(),
        certificate,
        envelope_chain,
        subsample,
    })
}
