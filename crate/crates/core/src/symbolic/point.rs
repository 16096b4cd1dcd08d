use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::family::{FamilyMember, SegmentSchedule};
use super::sequence::{parse_word, word_string, SymbolSequence, Word};
use crate::dynamics::{Distance, DynamicalSystem, PointSpace};
use crate::error::{Error, Result};

/// A point of the full binary shift with exact symbol access.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftPoint {
    Periodic(SymbolSequence),
    /// `σ^offset` of a family member.
    Member { member: Arc<FamilyMember>, offset: u64 },
    /// `prefix` followed by another point.
    Prefixed { prefix: Word, tail: Arc<ShiftPoint> },
}

impl ShiftPoint {
    pub fn member(member: Arc<FamilyMember>) -> Self {
        ShiftPoint::Member { member, offset: 0 }
    }

    /// `w x`, kept eventually periodic when `x` is.
    pub fn prepend(&self, w: &[u8]) -> ShiftPoint {
        if w.is_empty() {
            return self.clone();
        }
        match self {
            ShiftPoint::Periodic(s) => ShiftPoint::Periodic(s.prepend(w)),
            ShiftPoint::Prefixed { prefix, tail } => {
                let mut p = w.to_vec();
                p.extend_from_slice(prefix);
                ShiftPoint::Prefixed { prefix: p, tail: tail.clone() }
            }
            ShiftPoint::Member { .. } => ShiftPoint::Prefixed { prefix: w.to_vec(), tail: Arc::new(self.clone()) },
        }
    }

    /// Symbol at 1-based position `i`, `None` past the resolved part of a family member.
    pub fn symbol(&self, i: u64) -> Option<u8> {
        match self {
            ShiftPoint::Periodic(s) => Some(s.symbol(i)),
            ShiftPoint::Member { member, offset } => member.symbol(i + offset),
            ShiftPoint::Prefixed { prefix, tail } => {
                let l = prefix.len() as u64;
                if i <= l {
                    Some(prefix[(i - 1) as usize])
                } else {
                    tail.symbol(i - l)
                }
            }
        }
    }

    /// First position `> i` where the symbol may change.
    pub fn run_end(&self, i: u64) -> u64 {
        match self {
            ShiftPoint::Periodic(s) => s.run_end(i),
            ShiftPoint::Member { member, offset } => member.run_end(i + offset).saturating_sub(*offset),
            ShiftPoint::Prefixed { prefix, tail } => {
                let l = prefix.len() as u64;
                if i <= l {
                    i + 1
                } else {
                    tail.run_end(i - l).saturating_add(l)
                }
            }
        }
    }

    /// First `n` symbols, `None` if any is unresolved.
    pub fn prefix(&self, n: usize) -> Option<Word> {
        (1..=n as u64).map(|i| self.symbol(i)).collect()
    }

    /// `σᵏ`.
    pub fn shift_by(&self, k: u64) -> ShiftPoint {
        match self {
            ShiftPoint::Periodic(s) => ShiftPoint::Periodic(s.shift_by(k)),
            ShiftPoint::Member { member, offset } => ShiftPoint::Member { member: member.clone(), offset: offset + k },
            ShiftPoint::Prefixed { prefix, tail } => {
                let l = prefix.len() as u64;
                if k < l {
                    ShiftPoint::Prefixed { prefix: prefix[k as usize..].to_vec(), tail: tail.clone() }
                } else {
                    tail.shift_by(k - l)
                }
            }
        }
    }

    /// Number of leading symbols that can be stripped as a plain prefix, and the rest.
    fn split(&self) -> (usize, &ShiftPoint) {
        match self {
            ShiftPoint::Prefixed { prefix, tail } => (prefix.len(), tail),
            _ => (0, self),
        }
    }
}

impl fmt::Display for ShiftPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftPoint::Periodic(s) => write!(f, "{s}"),
            ShiftPoint::Member { member, offset: 0 } => write!(f, "{member}"),
            ShiftPoint::Member { member, offset } => write!(f, "shift^{offset}({member})"),
            ShiftPoint::Prefixed { prefix, tail } => write!(f, "{}+{tail}", word_string(prefix)),
        }
    }
}

/// Parses `preperiod|period` or `family:<schedule-id>:<parameter-word>`.
impl FromStr for ShiftPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("family:") {
            let (id, word) =
                rest.split_once(':').ok_or_else(|| Error::arg(format!("'{s}' is not family:<id>:<word>")))?;
            let id: u32 = id.parse().map_err(|_| Error::arg(format!("bad schedule id in '{s}'")))?;
            let parameter = parse_word(word)?;
            if parameter.is_empty() {
                return Err(Error::arg("family parameter must be nonempty"));
            }
            let schedule = Arc::new(SegmentSchedule::registered(id)?);
            return Ok(ShiftPoint::member(Arc::new(FamilyMember { schedule, parameter })));
        }
        Ok(ShiftPoint::Periodic(s.parse()?))
    }
}

/// The shift map `σ` on `Σ = {0,1}^ℕ` with metric `d(x, y) = 1/i`, `i` the first
/// differing position.
///
/// Distances involving family members are found by scanning constant runs; a pair
/// that agrees up to `eval_depth` without being provably equal yields
/// [`Distance::Below`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftSystem {
    pub eval_depth: u64,
}

impl Default for ShiftSystem {
    fn default() -> Self {
        ShiftSystem { eval_depth: 1 << 40 }
    }
}

/// Result of a first-difference search from some start position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstDifference {
    At(u64),
    Equal,
    /// Agreement on every position below the given bound, undecided beyond it.
    AgreeBelow(u64),
}

impl ShiftSystem {
    /// First 1-based position `≥ start` at which `x` and `y` differ.
    pub fn first_difference_from(&self, x: &ShiftPoint, y: &ShiftPoint, start: u64) -> FirstDifference {
        if let (ShiftPoint::Periodic(a), ShiftPoint::Periodic(b)) = (x, y) {
            return match a.first_difference_from(b, start) {
                Some(i) => FirstDifference::At(i),
                None => FirstDifference::Equal,
            };
        }
        // equal prefixes in front of the same tail
        let ((lx, tx), (ly, ty)) = (x.split(), y.split());
        if lx == ly && tx == ty {
            match (x, y) {
                (ShiftPoint::Prefixed { prefix: px, .. }, ShiftPoint::Prefixed { prefix: py, .. }) => {
                    let from = start.max(1) as usize;
                    return match (from..=lx).find(|&i| px[i - 1] != py[i - 1]) {
                        Some(i) => FirstDifference::At(i as u64),
                        None => FirstDifference::Equal,
                    };
                }
                _ => return FirstDifference::Equal,
            }
        }
        let limit = self.eval_depth;
        let mut i = start.max(1);
        while i <= limit {
            match (x.symbol(i), y.symbol(i)) {
                (Some(a), Some(b)) if a != b => return FirstDifference::At(i),
                (Some(_), Some(_)) => {}
                _ => return FirstDifference::AgreeBelow(i),
            }
            i = x.run_end(i).min(y.run_end(i));
        }
        FirstDifference::AgreeBelow(limit + 1)
    }

    pub fn shift_metric(&self, x: &ShiftPoint, y: &ShiftPoint) -> Distance {
        match self.first_difference_from(x, y, 1) {
            FirstDifference::At(i) => Distance::Reciprocal(i),
            FirstDifference::Equal => Distance::Zero,
            FirstDifference::AgreeBelow(b) => Distance::Below(b - 1),
        }
    }
}

impl DynamicalSystem for ShiftSystem {
    type State = ShiftPoint;

    fn space(&self) -> PointSpace {
        PointSpace::SHIFT
    }

    fn id(&self) -> String {
        "shift".into()
    }

    fn step(&self, x: &ShiftPoint, _index: usize) -> Result<ShiftPoint> {
        Ok(x.shift_by(1))
    }

    fn distance(&self, a: &ShiftPoint, b: &ShiftPoint) -> Distance {
        self.shift_metric(a, b)
    }

    /// Streams `d(σʲx, σʲy)` from one moving first-difference position `q`:
    /// while `j < q` the distance is `1/(q − j)`.
    fn for_each_pair_distance(
        &self,
        x: &ShiftPoint,
        y: &ShiftPoint,
        n: usize,
        sink: &mut dyn FnMut(usize, Distance) -> Result<()>,
    ) -> Result<()> {
        let mut next = FirstDifference::At(0);
        // positions in [q, differ_until) all differ once a difference at q is found
        let mut differ_until = 0u64;
        for j in 0..n {
            let pos = j as u64 + 1;
            if pos < differ_until && matches!(next, FirstDifference::At(q) if q <= pos) {
                sink(j, Distance::Reciprocal(1))?;
                continue;
            }
            let stale = match next {
                FirstDifference::At(q) => q < pos,
                FirstDifference::Equal => false,
                FirstDifference::AgreeBelow(b) => b <= pos,
            };
            if stale {
                next = self.first_difference_from(x, y, pos);
                if let FirstDifference::At(q) = next {
                    differ_until = x.run_end(q).min(y.run_end(q));
                }
            }
            let d = match next {
                FirstDifference::At(q) => Distance::Reciprocal(q - j as u64),
                FirstDifference::Equal => Distance::Zero,
                FirstDifference::AgreeBelow(b) => Distance::Below(b - pos),
            };
            sink(j, d)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ShiftPoint {
        s.parse().unwrap()
    }

    #[test]
    fn metric_of_basic_pairs() {
        let sys = ShiftSystem::default();
        assert_eq!(sys.shift_metric(&p("|0111"), &p("1|0")), Distance::Reciprocal(1));
        assert_eq!(sys.shift_metric(&p("|01"), &p("0|10")), Distance::Zero);
        assert_eq!(sys.shift_metric(&p("family:1:01"), &p("family:1:01")), Distance::Zero);
    }

    #[test]
    fn member_symbols_follow_segments() {
        let x = p("family:0:1");
        // boundaries 2, 4, 12, 48: positions 1..2 zero, 3..4 one, 5..12 zero, 13..48 one
        let w: Vec<u8> = (1..=14).map(|i| x.symbol(i).unwrap()).collect();
        assert_eq!(w, vec![0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1]);
    }

    #[test]
    fn streamed_distances_match_pointwise_metric() {
        let sys = ShiftSystem::default();
        let pairs = [
            (p("family:0:01"), p("family:0:10")),
            (p("family:0:1"), p("|0")),
            (p("family:0:1").prepend(&[1, 0, 1]), p("family:0:0").prepend(&[1, 1])),
            (p("family:0:1"), p("family:0:1").shift_by(3)),
        ];
        for (x, y) in pairs {
            let mut streamed = Vec::new();
            sys.for_each_pair_distance(&x, &y, 300, &mut |_, d| {
                streamed.push(d);
                Ok(())
            })
            .unwrap();
            let (mut a, mut b) = (x.clone(), y.clone());
            for d in streamed {
                assert_eq!(d, sys.shift_metric(&a, &b));
                a = a.shift_by(1);
                b = b.shift_by(1);
            }
        }
    }

    #[test]
    fn unresolved_agreement_is_reported_as_below() {
        let sys = ShiftSystem { eval_depth: 100 };
        let x = p("family:0:1");
        let y = x.prepend(&[]).shift_by(0);
        assert_eq!(sys.shift_metric(&x, &y), Distance::Zero);
        // same symbols, different representation
        let z = ShiftPoint::Prefixed { prefix: vec![0, 0], tail: Arc::new(x.shift_by(2)) };
        assert_eq!(sys.shift_metric(&x, &z), Distance::Below(100));
    }
}
