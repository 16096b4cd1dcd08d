use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::envelope::ENVELOPE_SAMPLES;
use super::feigenbaum::DyadicIntervalSystem;
use super::fiber::{q_samples, KSet};
use super::triangular::{FiberPoint, ProductEnvelope, TriangularMapSpec, TriangularSystem};
use crate::dcpoint::{DcPointClaim, PairReport, StatisticsPlan};
use crate::dynamics::{classify_pair, default_t_grid, geometric_horizons, psi_profile, DcClass, HorizonWindow};
use crate::error::{Error, Result};
use crate::parallel::try_par_map;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberPairSettings {
    pub count: usize,
    pub horizon: usize,
    pub delta: f64,
    /// Base points are drawn from the plateau set of this level.
    pub level: usize,
    pub seed: u64,
}

impl Default for FiberPairSettings {
    fn default() -> Self {
        FiberPairSettings { count: 10, horizon: 100_000, delta: 0.05, level: 1, seed: 0 }
    }
}

/// Pairs of generic points sharing a fiber over K-filtered plateau samples.
pub fn fiber_pairs(system: &DyadicIntervalSystem, kset: &KSet, settings: &FiberPairSettings) -> Result<Vec<(FiberPoint, FiberPoint)>> {
    let n = settings.level;
    if n == 0 || n > system.max_level {
        return Err(Error::arg(format!("plateau level {n} must lie in 1..={}", system.max_level)));
    }
    let bases = q_samples(system, n, 1 << (n - 1), kset, settings.count);
    if bases.len() < settings.count {
        return Err(Error::Construction(format!("only {} base samples outside K", bases.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    Ok(bases
        .into_iter()
        .map(|x| {
            let a = FiberPoint::generic(x, rng.gen(), rng.next_u64());
            let b = FiberPoint::generic(x, rng.gen(), rng.next_u64());
            (a, b)
        })
        .collect())
}

pub fn fiber_plan(horizon: usize) -> StatisticsPlan {
    StatisticsPlan { t_grid: default_t_grid(), horizons: geometric_horizons(horizon, 4), window: HorizonWindow::UpperHalf }
}

pub fn classify_fiber_pairs(
    spec: Arc<TriangularMapSpec>,
    pairs: &[(FiberPoint, FiberPoint)],
    horizon: usize,
    delta: f64,
) -> Result<Vec<PairReport>> {
    let system = TriangularSystem::new(spec);
    let plan = fiber_plan(horizon);
    try_par_map(pairs, |(a, b)| {
        let profile = psi_profile(&system, a, b, &plan.t_grid, &plan.horizons)?;
        Ok(PairReport { x: a.to_string(), y: b.to_string(), classification: classify_pair(&profile, delta, plan.window)? })
    })
}

/// A DCi-point claim at `(x_DC, 0)` with envelope `(J^m_{k0} ∩ Q) × [0, 2^-m]`,
/// `x_DC` the first envelope sample, scrambled points in the fiber over `x_DC`
/// and return iterate `2^m`.
pub fn kolyada_claim(
    system: &DyadicIntervalSystem,
    kset: &KSet,
    m: usize,
    k0: usize,
    class: DcClass,
    settings: &FiberPairSettings,
) -> Result<DcPointClaim<TriangularSystem>> {
    if m == 0 || m > system.max_level || k0 >= 1 << m {
        return Err(Error::arg(format!("J^{m}_{k0} is not resolved")));
    }
    let epsilon = 0.5f64.powi(m as i32);
    let base = q_samples(system, m, k0, kset, ENVELOPE_SAMPLES);
    let x_dc = *base.first().ok_or_else(|| Error::Construction(format!("no sample of J^{m}_{k0} outside K")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let scrambled = (0..settings.count.max(2))
        .map(|_| FiberPoint::generic(x_dc, epsilon * rng.gen::<f64>(), rng.next_u64()))
        .collect();
    Ok(DcPointClaim {
        x0: FiberPoint::exact(x_dc, 0.0),
        epsilon,
        class,
        scrambled,
        envelope: ProductEnvelope::new(base, epsilon),
        return_iterate: 1 << m,
        plan: fiber_plan(settings.horizon),
    })
}
