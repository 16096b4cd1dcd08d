use serde::{Deserialize, Serialize};

use super::feigenbaum::DyadicIntervalSystem;
use super::fiber::KSet;
use super::triangular::TriangularMapSpec;
use crate::error::{Error, Result};
use crate::parallel::par_map;

pub const VERDICT_FIRST_FAILS: &str = "first inclusion fails";
pub const VERDICT_NO_SHRINK: &str = "no shrinkage observed";
pub const VERDICT_DEGENERATE: &str = "degenerate";

/// Default number of envelope base samples.
pub const ENVELOPE_SAMPLES: usize = 1024;

/// A base sample whose fiber is shorter than `ε` at some iterate of a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkWitness {
    pub window: usize,
    pub iterate: usize,
    pub x: f64,
    /// `f^iterate(x)` and the index `p` of the level-`m` interval holding it.
    pub base: f64,
    pub portion: usize,
    pub height: f64,
}

/// `F^{2^{m+i}}` applied to the sub-envelope over `J^{m+i}_{k1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnFinding {
    pub i: usize,
    pub k1: usize,
    pub x_dc: f64,
    pub samples: usize,
    pub return_iterate: usize,
    pub max_height: f64,
    pub max_base_distance: f64,
    pub inside_ball: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub m: usize,
    pub k0: usize,
    pub epsilon: f64,
    pub horizon: usize,
    pub window_size: usize,
    pub samples: usize,
    pub k_excluded: usize,
    pub windows: usize,
    pub windows_with_witness: usize,
    pub shrink_witnesses: Vec<ShrinkWitness>,
    pub first_inclusion_fails: bool,
    pub return_finding: Option<ReturnFinding>,
    pub return_iterate: Option<usize>,
    pub verdict: String,
}

impl EnvelopeReport {
    pub fn second_inclusion_holds(&self) -> bool {
        self.return_finding.as_ref().is_some_and(|r| r.inside_ball)
    }
}

/// Samples `(global index, x)` of `J^n_k ∩ Q` outside `kset`, plus the excluded count.
fn indexed_samples(system: &DyadicIntervalSystem, n: usize, k: usize, kset: &KSet, limit: usize) -> (Vec<(usize, f64)>, usize) {
    let period = 1usize << n;
    let first = (k + period - system.transient % period) % period;
    let mut kept = Vec::new();
    let mut excluded = 0;
    for (i, &x) in system.critical_samples().iter().enumerate().skip(first).step_by(period) {
        if kept.len() == limit {
            break;
        }
        if kset.contains(x) {
            excluded += 1;
        } else {
            kept.push((system.transient + i, x));
        }
    }
    (kept, excluded)
}

/// Propagates the candidate envelope `(J^m_{k0} ∩ Q) × [0, ε]` and looks for a
/// shrinking fiber in every window of `2^m` iterates, then searches for the
/// periodic return of a sub-envelope into `B((x_DC, 0), ε)`.
pub fn envelope_shrinkage_test(
    spec: &TriangularMapSpec,
    system: &DyadicIntervalSystem,
    kset: &KSet,
    m: usize,
    k0: usize,
    epsilon: f64,
    horizon: usize,
) -> Result<EnvelopeReport> {
    if m == 0 || m >= system.max_level {
        return Err(Error::Construction(format!("level {m} is not resolved below depth {}", system.max_level)));
    }
    if k0 >= 1 << m {
        return Err(Error::arg(format!("index {k0} out of range at level {m}")));
    }
    if horizon < 1 << (m + 4) {
        return Err(Error::arg(format!("horizon {horizon} is below 2^(m+4)")));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::arg(format!("height {epsilon} must lie in (0, 1]")));
    }
    let window_size = 1usize << m;
    let (samples, k_excluded) = indexed_samples(system, m, k0, kset, ENVELOPE_SAMPLES);
    let traces: Vec<Vec<(f64, f64)>> = par_map(&samples, |&(_, x0)| {
        let (mut x, mut v) = (x0, epsilon);
        let mut out = Vec::with_capacity(horizon + 1);
        out.push((x, v));
        for _ in 0..horizon {
            v = spec.h(x) * (2.0 * v).min(1.0);
            x = spec.base.eval(x);
            out.push((x, v));
        }
        out
    });
    let degenerate = samples.is_empty() || traces.iter().all(|t| t.iter().skip(1).all(|&(_, v)| v == 0.0));
    let windows = horizon / window_size;
    let mut shrink_witnesses = Vec::new();
    for w in 0..windows {
        let mut best: Option<ShrinkWitness> = None;
        for (s, trace) in traces.iter().enumerate() {
            for j in w * window_size + 1..=(w + 1) * window_size {
                let (base, v) = trace[j];
                if v < epsilon && best.as_ref().is_none_or(|b| v < b.height) {
                    let portion = (samples[s].0 + j) % window_size;
                    best = Some(ShrinkWitness { window: w, iterate: j, x: samples[s].1, base, portion, height: v });
                }
            }
        }
        shrink_witnesses.extend(best);
    }
    let windows_with_witness = shrink_witnesses.len();
    let first_inclusion_fails = !degenerate && windows > 0 && windows_with_witness == windows;
    let return_finding = if degenerate { None } else { find_return(system, &samples, &traces, m, k0, epsilon, horizon) };
    let verdict = if degenerate {
        VERDICT_DEGENERATE
    } else if first_inclusion_fails {
        VERDICT_FIRST_FAILS
    } else {
        VERDICT_NO_SHRINK
    };
    Ok(EnvelopeReport {
        m,
        k0,
        epsilon,
        horizon,
        window_size,
        samples: samples.len(),
        k_excluded,
        windows,
        windows_with_witness,
        shrink_witnesses,
        first_inclusion_fails,
        return_iterate: return_finding.as_ref().filter(|r| r.inside_ball).map(|r| r.return_iterate),
        return_finding,
        verdict: verdict.into(),
    })
}

fn find_return(
    system: &DyadicIntervalSystem,
    samples: &[(usize, f64)],
    traces: &[Vec<(f64, f64)>],
    m: usize,
    k0: usize,
    epsilon: f64,
    horizon: usize,
) -> Option<ReturnFinding> {
    let mut fallback: Option<ReturnFinding> = None;
    for i in 1..=system.max_level - m {
        let level = m + i;
        let r = 1usize << level;
        if r > horizon {
            break;
        }
        let mut best: Option<ReturnFinding> = None;
        for k1 in (k0..1 << level).step_by(1 << m) {
            let members: Vec<usize> = (0..samples.len()).filter(|&s| samples[s].0 % r == k1).collect();
            let Some(&first) = members.first() else { continue };
            let x_dc = samples[first].1;
            let (mut max_height, mut max_base_distance) = (0.0f64, 0.0f64);
            for &s in &members {
                let (bx, v) = traces[s][r];
                max_height = max_height.max(v);
                max_base_distance = max_base_distance.max((bx - x_dc).abs());
            }
            let inside_ball = max_height < epsilon && max_base_distance < epsilon;
            let found = ReturnFinding { i, k1, x_dc, samples: members.len(), return_iterate: r, max_height, max_base_distance, inside_ball };
            if best.as_ref().is_none_or(|b| (found.inside_ball, -found.max_height) > (b.inside_ball, -b.max_height)) {
                best = Some(found);
            }
        }
        match best {
            Some(b) if b.inside_ball => return Some(b),
            Some(b) if fallback.is_none() => fallback = Some(b),
            _ => {}
        }
    }
    fallback
}
