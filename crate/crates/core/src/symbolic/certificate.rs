use std::fmt;

use super::family::ScrambledFamily;
use super::point::{ShiftPoint, ShiftSystem};
use super::sequence::{ball_depth, word_string, CylinderSet, Radius};
use super::transform::psi_transform;
use crate::dcpoint::{
    verify_claim, CheckResult, ClaimSpace, DcPointCertificate, DcPointClaim, StatisticsPlan, CHECK_A_IN_IMAGE,
    CHECK_IMAGE_IN_BALL, CHECK_S_IN_A,
};
use crate::dynamics::{default_t_grid, DcClass, HorizonWindow};
use crate::error::{Error, Result};

/// Cylinder envelope with the exact radius of the ball it should map into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderEnvelope {
    pub cylinder: CylinderSet,
    pub radius: Radius,
}

impl fmt::Display for CylinderEnvelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cylinder)
    }
}

impl ClaimSpace for ShiftSystem {
    type Envelope = CylinderEnvelope;

    fn space_id(&self) -> &'static str {
        "shift-binary"
    }

    fn label(&self, x: &ShiftPoint) -> String {
        x.to_string()
    }

    fn check_members(&self, envelope: &CylinderEnvelope, members: &[ShiftPoint]) -> Result<CheckResult> {
        let len = envelope.cylinder.prefix.len();
        for m in members {
            let inside = m.prefix(len).is_some_and(|w| envelope.cylinder.contains_prefix(&w));
            if !inside {
                return Ok(CheckResult::exact(CHECK_S_IN_A, false, format!("member outside {}", envelope.cylinder))
                    .with_witness(m.to_string()));
            }
        }
        Ok(CheckResult::exact(
            CHECK_S_IN_A,
            true,
            format!("all {} members start with {}", members.len(), word_string(&envelope.cylinder.prefix)),
        ))
    }

    fn check_envelope_in_image(&self, envelope: &CylinderEnvelope, n: usize) -> Result<CheckResult> {
        let image = envelope.cylinder.shift_by(n);
        let pass = envelope.cylinder.is_subset_of(&image);
        Ok(CheckResult::exact(CHECK_A_IN_IMAGE, pass, format!("shift^{n}{} = {image}", envelope.cylinder)))
    }

    fn check_image_in_ball(
        &self,
        envelope: &CylinderEnvelope,
        n: usize,
        x0: &ShiftPoint,
        _epsilon: f64,
    ) -> Result<CheckResult> {
        let image = envelope.cylinder.shift_by(n);
        let m = ball_depth(envelope.radius) as usize;
        let len = image.prefix.len();
        let head = x0.prefix(len.max(m)).ok_or_else(|| Error::arg(format!("{x0} is unresolved near its start")))?;
        let matches_x0 = image.prefix[..] == head[..len];
        // open ball B(x0, ε) is exactly the cylinder [x0|m]
        let image_in_ball = matches_x0 && len >= m;
        let ball_in_image = matches_x0 && len <= m;
        let relation = match (image_in_ball, ball_in_image) {
            (true, true) => "equals",
            (true, false) => "is strictly inside",
            (false, true) => "strictly contains",
            (false, false) => "is not comparable with",
        };
        Ok(CheckResult::exact(
            CHECK_IMAGE_IN_BALL,
            image_in_ball,
            format!("{image} {relation} B(x0, {}) = [{}]", envelope.radius, word_string(&head[..m])),
        ))
    }
}

/// Settings for the scrambled-set statistics inside a point certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateSettings {
    pub horizon: usize,
    pub delta: f64,
}

impl Default for CertificateSettings {
    fn default() -> Self {
        CertificateSettings { horizon: 1_000_000, delta: 0.05 }
    }
}

/// Certificate that `x0` is a DC1 point of the shift at radius `ε`, built from the
/// envelope `A = [x0|ₙ x0|ₙ]`, return iterate `n = m(ε)` and the scrambled sample
/// `ψ(S)`.
///
/// Besides the generic inclusions, the `A-in-image` check also requires the word
/// equality `σⁿ(A) = [x0|ₙ]`.
pub fn verify_dc_point(
    x0: &ShiftPoint,
    epsilon: Radius,
    family: &ScrambledFamily,
    depth: usize,
    settings: CertificateSettings,
) -> Result<DcPointCertificate> {
    let n = ball_depth(epsilon) as usize;
    if depth < 2 * n {
        return Err(Error::arg(format!("check depth {depth} is below 2·m(ε) = {}", 2 * n)));
    }
    let psi = psi_transform(x0, epsilon)?;
    let scrambled = psi.image_family(family);
    let shift = 2 * n;
    let mut horizons = family.schedule.checkpoints(settings.horizon, shift);
    if horizons.last() != Some(&settings.horizon) {
        horizons.push(settings.horizon);
    }
    let claim = DcPointClaim {
        x0: x0.clone(),
        epsilon: epsilon.value(),
        class: DcClass::Dc1,
        scrambled,
        envelope: CylinderEnvelope { cylinder: psi.cylinder(), radius: epsilon },
        return_iterate: n,
        plan: StatisticsPlan { t_grid: default_t_grid(), horizons, window: HorizonWindow::All },
    };
    let system = ShiftSystem::default();
    let mut cert = verify_claim(&system, &claim, settings.delta)?;

    // members must also agree with the check-depth prefix of A's extension: compare
    // the first `depth` symbols of every member image with ψ applied symbolwise
    let check = &mut cert.checks[0];
    for (m, img) in family.members.iter().zip(&claim.scrambled) {
        let direct = ShiftPoint::member(m.clone()).prefix(depth - shift);
        let via = img.prefix(depth);
        let ok = match (direct, via) {
            (Some(d), Some(v)) => v[..shift] == psi.prefix()[..] && v[shift..] == d[..],
            _ => false,
        };
        if !ok {
            check.pass = false;
            check.witness = Some(img.to_string());
        }
    }

    let image = claim.envelope.cylinder.shift_by(n);
    let equal = image.prefix == psi.head;
    let check = &mut cert.checks[1];
    check.pass &= equal;
    check.detail.push_str(&format!(
        "; word equality with [x0|{n}] = [{}]: {}",
        word_string(&psi.head),
        if equal { "holds" } else { "fails" }
    ));
    cert.pass = cert.checks.iter().all(|c| c.pass);
    Ok(cert)
}
