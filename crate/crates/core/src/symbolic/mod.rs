//! The full binary shift `(Σ, σ)`: exact sequences and metric, cylinders, the
//! DC1-scrambled family, the prefix transformation `ψ` and the cylinder-level
//! DC1-point certificate.

mod family;
mod certificate;
mod point;
mod sequence;
mod transform;

pub use family::{build_dc1_family, coordinate_of_segment, FamilyMember, ScrambledFamily, SegmentSchedule};
pub use certificate::{verify_dc_point, CylinderEnvelope, CertificateSettings};
pub use point::{FirstDifference, ShiftPoint, ShiftSystem};
pub use sequence::{ball_depth, parse_word, word_string, CylinderSet, Radius, SymbolSequence, Word};
pub use transform::{psi_transform, PsiTransform};

/// `σ` on an eventually periodic sequence.
pub fn shift(s: &SymbolSequence) -> SymbolSequence {
    s.shift()
}

/// `d(x, y)` on eventually periodic sequences: `None` for equal points, else the
/// first differing position `i` (the distance is `1/i`).
pub fn shift_metric(x: &SymbolSequence, y: &SymbolSequence) -> Option<u64> {
    x.first_difference(y)
}
