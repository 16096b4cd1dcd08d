use std::sync::{Arc, OnceLock};

use distchaos::dcpoint::{verify_claim, CHECK_A_IN_IMAGE};
use distchaos::dynamics::DcClass;
use distchaos::interval::IntervalMap1D;
use distchaos::kolyada::*;
use distchaos::Error;

struct Setup {
    system: DyadicIntervalSystem,
    spec: Arc<TriangularMapSpec>,
    kset: KSet,
}

fn setup() -> &'static Setup {
    static SETUP: OnceLock<Setup> = OnceLock::new();
    SETUP.get_or_init(|| {
        let system = feigenbaum_intervals(FEIGENBAUM_LAMBDA, MAX_LEVEL, 4096, 256).unwrap();
        let heights = build_height_field(&system, &NSequence::default(), 8).unwrap();
        let kset = KSet::new(FEIGENBAUM_LAMBDA, &heights.zero_anchors, K_ORBIT_LEN);
        let spec = Arc::new(TriangularMapSpec::new(IntervalMap1D::logistic(FEIGENBAUM_LAMBDA).unwrap(), heights));
        Setup { system, spec, kset }
    })
}

fn constant_field(h: f64) -> HeightField {
    HeightField {
        depth: 0,
        knots: vec![(0.0, h), (1.0, h)],
        plateaus: Vec::new(),
        zero_anchors: Vec::new(),
        core: (0.0, 1.0),
        unresolved: (0.0, 1.0),
    }
}

fn flat_spec(h: f64) -> TriangularMapSpec {
    TriangularMapSpec::new(IntervalMap1D::logistic(FEIGENBAUM_LAMBDA).unwrap(), constant_field(h))
}

#[test]
fn level_zero_holds_the_whole_attractor() {
    let sys = feigenbaum_intervals(FEIGENBAUM_LAMBDA, 0, 4096, 256).unwrap();
    assert_eq!(sys.level(0).len(), 1);
    let (a, b) = sys.interval(0, 0);
    assert!(sys.critical_samples().iter().all(|&x| a <= x && x <= b));
}

#[test]
fn depth_eight_system_is_valid() {
    let sys = feigenbaum_intervals(FEIGENBAUM_LAMBDA, 8, 4096, 256).unwrap();
    assert_eq!(sys.reports.len(), 9);
    for r in &sys.reports {
        assert!(r.image_defect < IMAGE_TOLERANCE, "level {}: {}", r.level, r.image_defect);
    }
    for n in 1..=8 {
        let (a, b) = sys.interval(n, 0);
        assert!(a <= 0.5 && 0.5 <= b);
    }
}

#[test]
fn out_of_range_parameters_are_rejected() {
    assert!(feigenbaum_intervals(3.9, 4, 4096, 256).is_err());
    assert!(feigenbaum_intervals(FEIGENBAUM_LAMBDA, 13, 4096, 256).is_err());
}

#[test]
fn default_sequence_partial_sums_follow_the_geometric_series() {
    let seq = choose_n_sequence("2i-1").unwrap();
    let mut sum = 0.0;
    for (i, &n) in seq.prefix.iter().enumerate() {
        assert_eq!(n, 2 * (i + 1) - 1);
        sum += 0.5f64.powi(n as i32);
        let closed = (2.0 / 3.0) * (1.0 - 0.25f64.powi(i as i32 + 1));
        assert!((sum - closed).abs() < 1e-15);
        assert!(sum <= 2.0 / 3.0);
        if i < 20 {
            assert!(sum < 2.0 / 3.0);
        }
    }
    assert!((seq.series_sum - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn inadmissible_sequences_are_rejected() {
    assert!(matches!(choose_n_sequence("i"), Err(Error::Argument(_))));
    let err = choose_n_sequence("i+1").unwrap_err().to_string();
    assert!(err.contains("[2"), "{err}");
}

#[test]
fn level_one_plateau_carries_the_full_tent() {
    let s = setup();
    let x = plateau_point(&s.system, 1, &s.kset).unwrap();
    assert_eq!(s.spec.h(x), 1.0);
    assert_eq!(s.spec.heights.plateau_of(x).unwrap().level, 1);
    assert_eq!(s.spec.h(0.5), 0.0);
    assert_eq!(s.spec.h(0.0), 0.0);
    assert_eq!(s.spec.h(1.0), 0.0);
}

#[test]
fn height_field_is_lipschitz_on_a_fine_grid() {
    let h = &setup().spec.heights;
    let slope = h.max_slope();
    assert!(slope.is_finite());
    let step = 1e-5;
    let mut prev = h.eval(0.0);
    for k in 1..=100_000 {
        let v = h.eval(k as f64 * step);
        assert!((v - prev).abs() <= slope * step * (1.0 + 1e-9) + 1e-15, "jump at {}", k as f64 * step);
        assert!((0.0..=1.0).contains(&v));
        prev = v;
    }
}

#[test]
fn plateau_heights_follow_the_sequence() {
    let s = setup();
    let seq = NSequence::default();
    for level in [1, 3, 5, 7] {
        let x = plateau_point(&s.system, level, &s.kset).unwrap();
        let i = (level + 1) / 2;
        let expected = 0.5f64.powi(i as i32 - 1);
        assert_eq!(seq.height_at_level(level), expected);
        assert_eq!(s.spec.h(x), expected);
        // one application to the full fiber shrinks it to the plateau height
        assert_eq!(s.spec.fiber_height(x, 1.0, 1), expected);
    }
}

#[test]
fn fiber_map_examples() {
    let s = setup();
    assert_eq!(eval_triangular(&s.spec, (0.3, 0.0)).1, 0.0);
    assert_eq!(eval_triangular(&s.spec, (0.5, 0.7)).1, 0.0);
    let full = flat_spec(1.0);
    assert_eq!(eval_triangular(&full, (0.3, 0.5)).1, 1.0);
}

#[test]
fn unit_heights_double_the_fiber_until_full() {
    let spec = flat_spec(1.0);
    let trace = fiber_range_from(&spec, 0.3, 0.5f64.powi(6), 10).unwrap();
    let expected: Vec<f64> = (0..=10).map(|j| 0.5f64.powi(6 - j.min(6))).collect();
    assert_eq!(trace.values, expected);
    assert_eq!(trace.recheck(&spec), None);
}

#[test]
fn zero_anchor_collapses_the_fiber() {
    let s = setup();
    let trace = fiber_range(&s.spec, 0.5, 2000).unwrap();
    assert!(trace.values[1..].iter().all(|&v| v == 0.0));
    let stats = lemma3_statistics(&trace, 0.5).unwrap();
    assert_eq!((stats.sup, stats.inf), (0.0, 0.0));
}

#[test]
fn statistics_of_a_doubling_trace() {
    let mut values: Vec<f64> = (0..=20).rev().map(|k| 0.5f64.powi(k)).collect();
    values.resize(1500, 1.0);
    let trace = FiberRangeTrace { x0: 0.3, values };
    let stats = lemma3_statistics(&trace, 1.0).unwrap();
    assert_eq!(stats.sup, 1.0);
    assert_eq!(stats.inf, 0.5f64.powi(20));
    assert_eq!(stats.low_hits, [16, 13]);
}

#[test]
fn short_traces_are_rejected() {
    let trace = FiberRangeTrace { x0: 0.3, values: vec![1.0; 10] };
    assert!(matches!(lemma3_statistics(&trace, 1.0), Err(Error::Argument(_))));
    assert!(fiber_range(&flat_spec(1.0), 0.3, 0).is_err());
}

#[test]
fn level_one_trace_reaches_both_extremes() {
    let s = setup();
    let x0 = plateau_point(&s.system, 1, &s.kset).unwrap();
    let trace = fiber_range(&s.spec, x0, 100_000).unwrap();
    assert_eq!(trace.recheck(&s.spec), None);
    let stats = lemma3_statistics(&trace, 1.0).unwrap();
    assert!(stats.sup >= SUP_THRESHOLD);
    assert!(stats.inf <= INF_THRESHOLDS[0]);
}

#[test]
fn k_set_membership() {
    let s = setup();
    assert!(k_set_test(&s.system, 0.5, 8, K_ORBIT_LEN).unwrap());
    assert!(k_set_test(&s.system, s.system.logistic(0.5), 8, K_ORBIT_LEN).unwrap());
    let generic = s.system.critical_samples()[1000];
    assert!(!k_set_test(&s.system, generic, 8, K_ORBIT_LEN).unwrap());
    // oracle: the sample stays away from every anchor orbit point
    let mut anchors = vec![0.0, 0.5, 1.0];
    anchors.extend(s.system.gap_periodic_points(8).unwrap());
    for &a in &anchors {
        let mut y = a;
        for _ in 0..=K_ORBIT_LEN {
            assert!((y - generic).abs() > K_TOLERANCE);
            y = s.system.logistic(y);
        }
    }
}

#[test]
fn envelope_shrinks_in_every_window() {
    let s = setup();
    let r = envelope_shrinkage_test(&s.spec, &s.system, &s.kset, 2, 1, 0.25, 256).unwrap();
    assert_eq!(r.verdict, VERDICT_FIRST_FAILS);
    assert!(r.first_inclusion_fails);
    assert_eq!(r.windows, 64);
    assert_eq!(r.windows_with_witness, r.windows);
    // oracle: replay every witness with the fiber recursion
    for w in &r.shrink_witnesses {
        let v = s.spec.fiber_height(w.x, 0.25, w.iterate);
        assert_eq!(v, w.height);
        assert!(v < 0.25);
    }
}

#[test]
fn whole_fiber_envelope_shrinks_trivially() {
    let s = setup();
    let r = envelope_shrinkage_test(&s.spec, &s.system, &s.kset, 2, 1, 1.0, 256).unwrap();
    assert!(r.first_inclusion_fails);
    assert!(r.shrink_witnesses.iter().all(|w| w.height < 1.0));
}

#[test]
fn zero_heights_are_degenerate() {
    let s = setup();
    let zero = flat_spec(0.0);
    let r = envelope_shrinkage_test(&zero, &s.system, &s.kset, 2, 1, 0.25, 256).unwrap();
    assert_eq!(r.verdict, VERDICT_DEGENERATE);
    assert!(!r.first_inclusion_fails);
}

#[test]
fn unresolved_level_is_a_construction_error() {
    let s = setup();
    let r = envelope_shrinkage_test(&s.spec, &s.system, &s.kset, MAX_LEVEL, 1, 0.25, 1 << 20);
    assert!(matches!(r, Err(Error::Construction(_))));
}

#[test]
fn dc2_claim_fails_the_first_inclusion_with_a_witness() {
    let s = setup();
    let settings = FiberPairSettings { horizon: 4096, ..FiberPairSettings::default() };
    let claim = kolyada_claim(&s.system, &s.kset, 2, 1, DcClass::Dc2, &settings).unwrap();
    let system = TriangularSystem::new(s.spec.clone());
    let cert = verify_claim(&system, &claim, settings.delta).unwrap();
    let check = cert.check(CHECK_A_IN_IMAGE).unwrap();
    assert!(!check.pass);
    assert!(check.witness.is_some());
    assert!(!cert.pass);
}

#[test]
fn fiber_pairs_never_show_dc1() {
    let s = setup();
    let settings = FiberPairSettings { count: 4, horizon: 20_000, ..FiberPairSettings::default() };
    let pairs = fiber_pairs(&s.system, &s.kset, &settings).unwrap();
    assert_eq!(pairs.len(), 4);
    let reports = classify_fiber_pairs(s.spec.clone(), &pairs, settings.horizon, settings.delta).unwrap();
    assert!(reports.iter().all(|r| r.classification.verdict != DcClass::Dc1));
}

#[test]
fn generic_fiber_points_keep_their_digits() {
    let s = setup();
    let sys = TriangularSystem::new(s.spec.clone());
    let x0 = plateau_point(&s.system, 1, &s.kset).unwrap();
    let a = FiberPoint::generic(x0, 0.3, 7);
    let b = FiberPoint::generic(x0, 0.3, 7);
    let oa = distchaos::dynamics::orbit(&sys, &a, 500).unwrap();
    let ob = distchaos::dynamics::orbit(&sys, &b, 500).unwrap();
    assert_eq!(oa.points, ob.points);
    // the fiber coordinate does not die out after the mantissa is shifted away
    assert!(oa.points[100..].iter().any(|p| p.y() > 0.0));
}
