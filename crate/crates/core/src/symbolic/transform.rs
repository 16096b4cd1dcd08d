use std::sync::Arc;

use super::family::ScrambledFamily;
use super::point::ShiftPoint;
use super::sequence::{ball_depth, CylinderSet, Radius, Word};
use crate::error::{Error, Result};

/// `ψ(x) = α|ₙ α|ₙ x` with `n = m(ε)`: maps the whole shift into the cylinder
/// `A = [α|ₙ α|ₙ]`, and `σⁿ(A) = [α|ₙ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiTransform {
    pub n: usize,
    /// `α|ₙ`.
    pub head: Word,
}

impl PsiTransform {
    /// The doubled prefix `α|ₙ α|ₙ`.
    pub fn prefix(&self) -> Word {
        let mut w = self.head.clone();
        w.extend_from_slice(&self.head);
        w
    }

    pub fn image(&self, x: &ShiftPoint) -> ShiftPoint {
        x.prepend(&self.prefix())
    }

    /// The image cylinder `A`.
    pub fn cylinder(&self) -> CylinderSet {
        CylinderSet { prefix: self.prefix() }
    }

    /// `ψ(S)` for a family sample.
    pub fn image_family(&self, family: &ScrambledFamily) -> Vec<ShiftPoint> {
        family.members.iter().map(|m| self.image(&ShiftPoint::member(Arc::clone(m)))).collect()
    }
}

pub fn psi_transform(alpha: &ShiftPoint, epsilon: Radius) -> Result<PsiTransform> {
    let n = ball_depth(epsilon) as usize;
    let head = alpha
        .prefix(n)
        .ok_or_else(|| Error::arg(format!("first {n} symbols of {alpha} are not resolved")))?;
    Ok(PsiTransform { n, head })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::ShiftSystem;
    use crate::dynamics::Distance;

    #[test]
    fn image_starts_with_doubled_prefix() {
        let alpha: ShiftPoint = "|011".parse().unwrap();
        let psi = psi_transform(&alpha, "1/3".parse().unwrap()).unwrap();
        assert_eq!(psi.prefix(), vec![0, 1, 1, 0, 1, 1]);
        let x: ShiftPoint = "1|0".parse().unwrap();
        assert_eq!(psi.image(&x).prefix(7).unwrap(), vec![0, 1, 1, 0, 1, 1, 1]);
    }

    #[test]
    fn first_difference_moves_by_twice_the_depth() {
        let sys = ShiftSystem::default();
        let alpha: ShiftPoint = "|0".parse().unwrap();
        let psi = psi_transform(&alpha, "0.25".parse().unwrap()).unwrap();
        let x: ShiftPoint = "01|1".parse().unwrap();
        let y: ShiftPoint = "00|1".parse().unwrap();
        assert_eq!(sys.shift_metric(&x, &y), Distance::Reciprocal(2));
        assert_eq!(sys.shift_metric(&psi.image(&x), &psi.image(&y)), Distance::Reciprocal(10));
    }
}
