use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::sequence::{word_string, Word};
use crate::error::{Error, Result};

/// Positions past this are never materialised; boundaries beyond it are dropped.
const BOUNDARY_CAP: u64 = 1 << 60;

/// Segment boundaries `a_1 < a_2 < …` on 0-based positions.
///
/// The listed lead boundaries are used verbatim, after which `a_{k+1} = (k+1)·a_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentSchedule {
    pub id: u32,
    boundaries: Vec<u64>,
}

impl SegmentSchedule {
    pub fn from_lead(id: u32, lead: &[u64]) -> Result<Self> {
        if lead.is_empty() || lead[0] < 2 {
            return Err(Error::arg("schedule needs a_1 ≥ 2"));
        }
        for (k, w) in lead.windows(2).enumerate() {
            // w = (a_{k+1}, a_{k+2})
            if w[1] < (k as u64 + 2) * w[0] {
                return Err(Error::arg(format!(
                    "schedule boundary a_{} = {} is below {}·a_{}",
                    k + 2,
                    w[1],
                    k + 2,
                    k + 1
                )));
            }
        }
        let mut boundaries = lead.to_vec();
        while let Some(&last) = boundaries.last() {
            let k = boundaries.len() as u64;
            match last.checked_mul(k + 1) {
                Some(next) if next <= BOUNDARY_CAP => boundaries.push(next),
                _ => break,
            }
        }
        Ok(SegmentSchedule { id, boundaries })
    }

    /// The registered schedules addressable as `family:<id>:<word>`.
    ///
    /// * 0: `a_1 = 2, a_{k+1} = (k+1)·a_k`.
    /// * 1: widened lead for horizon 10⁵ statistics.
    /// * 2: long first segment, tolerating prefixes of up to 20 symbols at horizon 10⁶.
    /// * 3: short schedule for interval pull-backs at horizon 10⁴.
    pub fn registered(id: u32) -> Result<Self> {
        let lead: &[u64] = match id {
            0 => &[2],
            1 => &[2, 48, 3072, 73728],
            2 => &[2, 480, 30720, 737280],
            3 => &[2, 24, 768, 9600],
            _ => return Err(Error::arg(format!("unknown segment schedule {id}"))),
        };
        SegmentSchedule::from_lead(id, lead)
    }

    /// `a_1, a_2, …` up to the materialisation cap.
    pub fn boundaries(&self) -> &[u64] {
        &self.boundaries
    }

    /// Last position covered by the schedule.
    pub fn resolved_len(&self) -> u64 {
        *self.boundaries.last().unwrap()
    }

    /// Segment index `k ≥ 1` of 0-based position `p` (0 before `a_1`), and the segment end.
    fn locate(&self, p: u64) -> (usize, u64) {
        let k = self.boundaries.partition_point(|&a| a <= p);
        let end = self.boundaries.get(k).copied().unwrap_or(u64::MAX);
        (k, end)
    }

    /// Checkpoint horizons (step counts) at which the designed statistics peak and dip:
    /// ends of odd segments and midpoints of even segments, shifted by `time_shift`
    /// (the length of any prefix put in front of the members), up to `horizon`.
    pub fn checkpoints(&self, horizon: usize, time_shift: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let b = &self.boundaries;
        for k in 1..b.len() {
            let (start, end) = (b[k - 1], b[k]);
            let n = if k % 2 == 1 { end } else { start + (end - start) / 2 };
            let n = n as usize + time_shift;
            if n <= horizon {
                out.push(n);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Odd segment number `s ≥ 1` → parameter coordinate `e(s) ≥ 1`, enumerating the
/// blocks `1,2; 1,2,3; 1,2,3,4; …`.
pub fn coordinate_of_segment(s: u64) -> u64 {
    let mut r = s - 1;
    let mut len = 2;
    while r >= len {
        r -= len;
        len += 1;
    }
    r + 1
}

/// One member `x_α` of the DC1-scrambled family: zeros before `a_1` and on even
/// segments, the constant `α_{e(s)}` on odd segment `s`, where `α` is the
/// parameter word repeated periodically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub schedule: Arc<SegmentSchedule>,
    pub parameter: Word,
}

impl FamilyMember {
    /// `α_e` for 1-based coordinate `e`.
    pub fn coordinate(&self, e: u64) -> u8 {
        self.parameter[((e - 1) % self.parameter.len() as u64) as usize]
    }

    fn segment_symbol(&self, k: usize) -> u8 {
        if k % 2 == 0 {
            0
        } else {
            self.coordinate(coordinate_of_segment(k.div_ceil(2) as u64))
        }
    }

    /// Symbol at 1-based position `i`, or `None` past the resolved schedule.
    pub fn symbol(&self, i: u64) -> Option<u8> {
        let p = i - 1;
        if p >= self.schedule.resolved_len() {
            return None;
        }
        let (k, _) = self.schedule.locate(p);
        Some(self.segment_symbol(k))
    }

    /// First 1-based position `> i` where the symbol may change.
    pub fn run_end(&self, i: u64) -> u64 {
        let (_, end) = self.schedule.locate(i - 1);
        end.saturating_add(1)
    }

    pub fn label(&self) -> String {
        format!("family:{}:{}", self.schedule.id, word_string(&self.parameter))
    }
}

impl fmt::Display for FamilyMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Finite sample of the DC1-scrambled family: members for distinct parameter words.
#[derive(Debug, Clone, PartialEq)]
pub struct ScrambledFamily {
    pub schedule: Arc<SegmentSchedule>,
    pub members: Vec<Arc<FamilyMember>>,
}

impl ScrambledFamily {
    pub fn from_parameters(parameters: Vec<Word>, schedule: SegmentSchedule) -> Result<Self> {
        if parameters.len() < 2 {
            return Err(Error::arg("a scrambled family needs at least two parameters"));
        }
        let len = parameters[0].len();
        if len == 0 || parameters.iter().any(|p| p.len() != len || p.iter().any(|&b| b > 1)) {
            return Err(Error::arg("parameters must be nonempty binary words of equal length"));
        }
        for (i, p) in parameters.iter().enumerate() {
            if parameters[..i].contains(p) {
                return Err(Error::arg(format!("duplicate parameter {}", word_string(p))));
            }
        }
        let schedule = Arc::new(schedule);
        let members = parameters
            .into_iter()
            .map(|parameter| Arc::new(FamilyMember { schedule: schedule.clone(), parameter }))
            .collect();
        Ok(ScrambledFamily { schedule, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index pairs `(i, j)` with `i < j`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.members.len();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }
}

/// `count` members whose parameters are the first `count` binary words of the
/// shortest length that has that many.
pub fn build_dc1_family(count: usize, schedule: SegmentSchedule) -> Result<ScrambledFamily> {
    if count < 2 {
        return Err(Error::arg("a scrambled family needs at least two members"));
    }
    let len = (usize::BITS - (count - 1).leading_zeros()) as usize;
    let parameters = (0..count)
        .map(|v| (0..len).rev().map(|b| ((v >> b) & 1) as u8).collect())
        .collect();
    ScrambledFamily::from_parameters(parameters, schedule)
}
