use std::fmt::Display;
use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::config::{ExperimentConfig, Settings};
use super::{Common, Dc1PointsArgs, EnvelopeArgs, HorseshoeArgs, KolyadaArgs, PsiArgs, ShiftDcpointArgs};
use crate::dcpoint::{PairReport, NUMERIC_MARGIN};
use crate::dynamics::{
    classify_pair, default_t_grid, geometric_horizons, psi_profile, DcClass, DistributionalProfile, DynamicalSystem,
    HorizonWindow,
};
use crate::error::{Error, Result};
use crate::interval::{
    dc1_point_sample, entropy_lower_bound, find_horseshoe, refine_tree, IntervalMap1D, PullbackSettings,
    COVER_TOLERANCE, ENDPOINT_TOLERANCE,
};
use crate::kolyada::{
    build_height_field, choose_n_sequence, classify_fiber_pairs, envelope_shrinkage_test, feigenbaum_intervals,
    fiber_pairs, fiber_range, lemma3_statistics, plateau_point, DyadicIntervalSystem, FiberPairSettings, HeightField,
    KSet, TriangularMapSpec, FEIGENBAUM_LAMBDA, IMAGE_TOLERANCE, K_ORBIT_LEN, K_TOLERANCE, MAX_LEVEL,
};
use crate::parallel::try_par_map;
use crate::report::{write_csv, write_json, Manifest};
use crate::symbolic::{build_dc1_family, verify_dc_point, CertificateSettings, Radius, SegmentSchedule, ShiftPoint, ShiftSystem, SymbolSequence};

struct Run {
    settings: Settings,
    out: PathBuf,
    seed: u64,
    command: &'static str,
}

impl Run {
    fn new<A: Serialize>(command: &'static str, args: &A, common: &Common) -> Result<Self> {
        let config = common.config.as_deref().map(ExperimentConfig::load).transpose()?;
        let mut settings = Settings::new(args, config.as_ref())?;
        let out = PathBuf::from(settings.string("out", &format!("distchaos-out/{command}"))?);
        let seed = settings.parse("seed", "0")?;
        Ok(Run { settings, out, seed, command })
    }

    fn manifest(&self) -> Manifest {
        // the output location is not part of the experiment
        Manifest::new(self.command, self.seed).with_config(self.settings.used.iter().filter(|(k, _)| *k != "out"))
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',').map(|p| p.trim().parse().map_err(|_| Error::arg(format!("--{key}: cannot parse {p:?}")))).collect()
}

fn window_of(name: &str) -> Result<HorizonWindow> {
    match name {
        "upper-half" => Ok(HorizonWindow::UpperHalf),
        "all" => Ok(HorizonWindow::All),
        _ => Err(Error::arg(format!("--window {name:?}: expected upper-half or all"))),
    }
}

fn profile_pairs<D>(
    system: &D,
    pairs: &[(D::State, D::State)],
    t_grid: &[f64],
    horizons: &[usize],
    delta: f64,
    window: HorizonWindow,
) -> Result<Vec<(DistributionalProfile, PairReport)>>
where
    D: DynamicalSystem,
    D::State: Display,
{
    try_par_map(pairs, |(x, y)| {
        let profile = psi_profile(system, x, y, t_grid, horizons)?.labeled(x.to_string(), y.to_string());
        let classification = classify_pair(&profile, delta, window)?;
        Ok((profile, PairReport { x: x.to_string(), y: y.to_string(), classification }))
    })
}

pub fn psi(a: &PsiArgs) -> Result<bool> {
    let mut run = Run::new("psi", a, &a.common)?;
    let s = &mut run.settings;
    let system = s.string("system", "tent:2")?;
    let horizon = s.usize_in("horizon", 10_000, 1, 1 << 40)?;
    let delta = s.f64_in("delta", "0.05", 0.0, 0.5, false)?;
    let t_grid = match s.optional("t-grid")? {
        Some(v) => parse_list("t-grid", &v)?,
        None => default_t_grid(),
    };
    let results = if system == "shift" {
        let (pairs, schedule) = if s.is_set("family") {
            let count = s.usize_in("family", 4, 2, 64)?;
            let schedule = SegmentSchedule::registered(s.parse("schedule", "1")?)?;
            let family = build_dc1_family(count, schedule.clone())?;
            let members: Vec<ShiftPoint> = family.members.iter().map(|m| ShiftPoint::member(m.clone())).collect();
            let pairs = family.pairs().into_iter().map(|(i, j)| (members[i].clone(), members[j].clone())).collect();
            (pairs, Some(schedule))
        } else {
            let pair: Vec<ShiftPoint> = parse_list("pair", &s.required("pair")?)?;
            let [x, y] = <[ShiftPoint; 2]>::try_from(pair).map_err(|_| Error::arg("--pair needs exactly two points"))?;
            let schedule = [&x, &y].into_iter().find_map(|p| match p {
                ShiftPoint::Member { member, .. } => Some((*member.schedule).clone()),
                _ => None,
            });
            (vec![(x, y)], schedule)
        };
        let kind = s.string("horizons", if schedule.is_some() { "checkpoints" } else { "geometric" })?;
        let horizons = match (kind.as_str(), schedule) {
            ("checkpoints", Some(sch)) => {
                let mut h = sch.checkpoints(horizon, 0);
                if h.last() != Some(&horizon) {
                    h.push(horizon);
                }
                h
            }
            ("checkpoints", None) => return Err(Error::arg("--horizons checkpoints needs family members")),
            ("geometric", _) => geometric_horizons(horizon, s.usize_in("per-octave", 4, 1, 64)?),
            (other, _) => return Err(Error::arg(format!("--horizons {other:?}: expected geometric or checkpoints"))),
        };
        let window = window_of(&s.string("window", if kind == "checkpoints" { "all" } else { "upper-half" })?)?;
        profile_pairs(&ShiftSystem::default(), &pairs, &t_grid, &horizons, delta, window)?
    } else {
        let map: IntervalMap1D = system.parse()?;
        let pair: Vec<f64> = parse_list("pair", &s.required("pair")?)?;
        let [x, y] = <[f64; 2]>::try_from(pair).map_err(|_| Error::arg("--pair needs exactly two points"))?;
        let horizons = geometric_horizons(horizon, s.usize_in("per-octave", 4, 1, 64)?);
        let window = window_of(&s.string("window", "upper-half")?)?;
        profile_pairs(&map, &[(x, y)], &t_grid, &horizons, delta, window)?
    };
    let manifest = run.manifest();
    let single = results.len() == 1;
    for (i, (profile, _)) in results.iter().enumerate() {
        let name = if single { "profile.csv".to_string() } else { format!("profile-{i}.csv") };
        let mut m = manifest.clone();
        m.config.insert("pair".into(), format!("{},{}", profile.pair.0, profile.pair.1));
        write_csv(&run.out.join(name), &m, &profile.to_csv())?;
    }
    let pairs: Vec<&PairReport> = results.iter().map(|(_, r)| r).collect();
    write_json(&run.out.join("classification.json"), &manifest, &json!({ "pairs": pairs }))?;
    for r in &pairs {
        println!("{} vs {}: {}", r.x, r.y, r.classification.summary());
    }
    Ok(true)
}

fn random_sequence(rng: &mut ChaCha8Rng) -> SymbolSequence {
    let pre = (0..rng.gen_range(0..=4)).map(|_| rng.gen_range(0..=1)).collect();
    let per = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..=1)).collect();
    SymbolSequence::new(pre, per).expect("period is nonempty")
}

pub fn shift_dcpoint(a: &ShiftDcpointArgs) -> Result<bool> {
    let mut run = Run::new("shift-dcpoint", a, &a.common)?;
    let seed = run.seed;
    let s = &mut run.settings;
    let schedule = SegmentSchedule::registered(s.parse("schedule", "2")?)?;
    let family = build_dc1_family(s.usize_in("family-size", 4, 2, 64)?, schedule)?;
    let settings = CertificateSettings {
        horizon: s.usize_in("horizon", 1_000_000, 1, 1 << 40)?,
        delta: s.f64_in("delta", "0.05", 0.0, 0.5, false)?,
    };
    let epsilon: Option<Radius> = s.optional("epsilon")?.map(|e| e.parse()).transpose()?;
    let mut points = Vec::new();
    if s.is_set("batch") {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..s.usize_in("batch", 1, 1, 10_000)? {
            let x0 = ShiftPoint::Periodic(random_sequence(&mut rng));
            let m = rng.gen_range(1..=10u64);
            points.push((x0, epsilon.unwrap_or(Radius::reciprocal(m)?)));
        }
    } else {
        let x0: ShiftPoint = s.required("x0")?.parse()?;
        points.push((x0, epsilon.ok_or_else(|| Error::arg("missing --epsilon"))?));
    }
    let certificates = try_par_map(&points, |(x0, eps)| {
        let depth = 2 * crate::symbolic::ball_depth(*eps) as usize + 64;
        verify_dc_point(x0, *eps, &family, depth, settings)
    })?;
    let pass = certificates.iter().all(|c| c.pass);
    for c in &certificates {
        println!("{} at epsilon {}: {}", c.x0, c.epsilon, if c.pass { "pass" } else { "FAIL" });
    }
    write_json(&run.out.join("certificate.json"), &run.manifest(), &json!({ "pass": pass, "certificates": certificates }))?;
    Ok(pass)
}

pub fn horseshoe(a: &HorseshoeArgs) -> Result<bool> {
    let mut run = Run::new("horseshoe", a, &a.common)?;
    let s = &mut run.settings;
    let map: IntervalMap1D = s.string("system", "logistic:4")?.parse()?;
    let kmax = s.usize_in("kmax", 4, 1, 64)?;
    let grid = s.usize_in("grid", 1024, 64, 1 << 20)?;
    let found = find_horseshoe(&map, kmax, grid)?;
    let manifest = run.manifest().tolerance("cover", COVER_TOLERANCE);
    let bound = found.as_ref().map(entropy_lower_bound);
    write_json(&run.out.join("horseshoe.json"), &manifest, &json!({ "found": found.is_some(), "horseshoe": found, "entropy_lower_bound": bound }))?;
    match &found {
        Some(h) => println!("horseshoe at k = {} with {} intervals, entropy >= {:.6}", h.k, h.s(), bound.unwrap_or(0.0)),
        None => println!("no horseshoe with k <= {kmax} at grid {grid}"),
    }
    Ok(found.is_some())
}

pub fn dc1_points(a: &Dc1PointsArgs) -> Result<bool> {
    let mut run = Run::new("dc1-points", a, &a.common)?;
    let s = &mut run.settings;
    let map: IntervalMap1D = s.string("system", "tent:2")?.parse()?;
    let kmax = s.usize_in("kmax", 4, 1, 64)?;
    let grid = s.usize_in("grid", 1024, 64, 1 << 20)?;
    let depth = s.usize_in("depth", 10, 1, 40)?;
    let alpha: ShiftPoint = s.string("alpha", "|011")?.parse()?;
    let epsilon: Radius = s.parse("epsilon", "1/4")?;
    let schedule = SegmentSchedule::registered(s.parse("schedule", "3")?)?;
    let family = build_dc1_family(s.usize_in("family-size", 4, 2, 64)?, schedule)?;
    let settings = PullbackSettings {
        horizon: s.usize_in("horizon", 10_000, 1, 1 << 32)?,
        delta: s.f64_in("delta", "0.1", 0.0, 0.5, false)?,
        ..PullbackSettings::default()
    };
    let manifest = run.manifest().tolerance("cover", COVER_TOLERANCE).tolerance("endpoint", ENDPOINT_TOLERANCE).tolerance("numeric-margin", NUMERIC_MARGIN);
    let Some(h) = find_horseshoe(&map, kmax, grid)? else {
        println!("no horseshoe with k <= {kmax}; nothing to pull back");
        write_json(&run.out.join("dc1-points.json"), &manifest, &json!({ "horseshoe": null }))?;
        return Ok(false);
    };
    let tree = Arc::new(refine_tree(&map, &h, depth)?);
    write_csv(&run.out.join("tree.csv"), &manifest, &tree.to_csv())?;
    let report = dc1_point_sample(tree, &alpha, &family, epsilon, settings)?;
    let pass = report.certificate.pass && report.all_pairs_dc1();
    for p in &report.certificate.pairs {
        println!("{} vs {}: {}", p.x, p.y, p.classification.summary());
    }
    println!("x0 = {:.15} ({}): {}", report.x0, report.x0_word, if pass { "pass" } else { "FAIL" });
    write_json(&run.out.join("dc1-points.json"), &manifest, &report)?;
    Ok(pass)
}

struct KolyadaSetup {
    system: DyadicIntervalSystem,
    heights: HeightField,
    spec: Arc<TriangularMapSpec>,
    kset: KSet,
}

fn kolyada_setup(s: &mut Settings) -> Result<KolyadaSetup> {
    let lambda = s.f64_in("lambda", &FEIGENBAUM_LAMBDA.to_string(), 3.5, 3.6, true)?;
    let levels = s.usize_in("levels", MAX_LEVEL, 1, MAX_LEVEL)?;
    let transient = s.usize_in("transient", 4096, 1000, 1 << 30)?;
    let samples = s.usize_in("samples", 256, 256, 1 << 16)?;
    let depth = s.usize_in("depth", 8, 1, levels)?;
    let nseq = choose_n_sequence(&s.string("nseq", "2i-1")?)?;
    let system = feigenbaum_intervals(lambda, levels, transient, samples)?;
    let heights = build_height_field(&system, &nseq, depth)?;
    let kset = KSet::new(lambda, &heights.zero_anchors, K_ORBIT_LEN);
    let spec = Arc::new(TriangularMapSpec::new(IntervalMap1D::logistic(lambda)?, heights.clone()));
    Ok(KolyadaSetup { system, heights, spec, kset })
}

fn kolyada_manifest(run: &Run) -> Manifest {
    run.manifest().tolerance("image", IMAGE_TOLERANCE).tolerance("k-set", K_TOLERANCE)
}

pub fn kolyada(a: &KolyadaArgs) -> Result<bool> {
    let mut run = Run::new("kolyada", a, &a.common)?;
    let s = &mut run.settings;
    let k = kolyada_setup(s)?;
    let horizon = s.usize_in("horizon", 100_000, 1, 1 << 32)?;
    let level = s.usize_in("x0-plateau", 1, 1, k.heights.depth)?;
    let tail = s.f64_in("tail", "0.5", 0.0, 1.0, true)?;
    let x0 = plateau_point(&k.system, level, &k.kset)?;
    let trace = fiber_range(&k.spec, x0, horizon)?;
    let stats = lemma3_statistics(&trace, tail)?;
    let manifest = kolyada_manifest(&run);
    write_csv(&run.out.join("intervals.csv"), &manifest, &k.system.to_csv())?;
    write_csv(&run.out.join("trace.csv"), &manifest, &trace.to_csv())?;
    let hf = &k.heights;
    write_json(
        &run.out.join("fiber-stats.json"),
        &manifest,
        &json!({
            "x0": x0,
            "x0_plateau": level,
            "h_x0": k.spec.h(x0),
            "statistics": stats,
            "levels": k.system.reports,
            "height_field": {
                "depth": hf.depth,
                "knots": hf.knots.len(),
                "plateaus": hf.plateaus,
                "zero_anchors": hf.zero_anchors,
                "core": hf.core,
                "unresolved": hf.unresolved,
            },
        }),
    )?;
    println!(
        "x0 = {x0:.15}: sup {:.6} inf {:.3e}, hits >= 0.9: {}, <= 2^-5: {}, <= 2^-8: {}",
        stats.sup, stats.inf, stats.high_hits, stats.low_hits[0], stats.low_hits[1]
    );
    Ok(true)
}

pub fn envelope(a: &EnvelopeArgs) -> Result<bool> {
    let mut run = Run::new("envelope", a, &a.common)?;
    let seed = run.seed;
    let s = &mut run.settings;
    let k = kolyada_setup(s)?;
    let m = s.usize_in("m", 2, 1, k.system.max_level - 1)?;
    let k0 = s.usize_in("k0", 1, 0, (1 << m) - 1)?;
    let epsilon = s.f64_in("epsilon", &0.5f64.powi(m as i32).to_string(), 0.0, 1.0, true)?;
    let horizon = s.usize_in("horizon", 1 << (m + 6), 1 << (m + 4), 1 << 32)?;
    let settings = FiberPairSettings {
        count: s.usize_in("pairs", 10, 0, 10_000)?,
        horizon: s.usize_in("pair-horizon", 100_000, 1, 1 << 32)?,
        delta: s.f64_in("delta", "0.05", 0.0, 0.5, false)?,
        level: 1,
        seed,
    };
    let report = envelope_shrinkage_test(&k.spec, &k.system, &k.kset, m, k0, epsilon, horizon)?;
    let pairs = fiber_pairs(&k.system, &k.kset, &settings)?;
    let classified = classify_fiber_pairs(k.spec.clone(), &pairs, settings.horizon, settings.delta)?;
    let any_dc1 = classified.iter().any(|p| p.classification.verdict == DcClass::Dc1);
    let any_dc2_or_dc3 = classified.iter().any(|p| matches!(p.classification.verdict, DcClass::Dc2 | DcClass::Dc3));
    let manifest = kolyada_manifest(&run);
    write_json(&run.out.join("envelope.json"), &manifest, &report)?;
    write_json(
        &run.out.join("pairs.json"),
        &manifest,
        &json!({ "any_dc1": any_dc1, "any_dc2_or_dc3": any_dc2_or_dc3, "pairs": classified }),
    )?;
    println!(
        "m = {m}: {} ({}/{} windows with a shrink witness); return at {:?}",
        report.verdict, report.windows_with_witness, report.windows, report.return_iterate
    );
    println!("fiber pairs: DC1 {any_dc1}, DC2 or DC3 {any_dc2_or_dc3}");
    Ok(report.first_inclusion_fails && report.second_inclusion_holds())
}
