mod common;

use distchaos::dynamics::{
    classify_pair, default_t_grid, orbit, psi_bounds, psi_n, psi_profile, xi_count, DcClass, DistributionalProfile,
    DynamicalSystem, HorizonWindow,
};
use distchaos::interval::IntervalMap1D;
use distchaos::kolyada::{fiber_range_from, tent, HeightField, TriangularMapSpec};
use distchaos::symbolic::{shift, shift_metric, SymbolSequence};
use proptest::prelude::*;

fn map_strategy() -> impl Strategy<Value = IntervalMap1D> {
    prop_oneof![
        (3.0f64..=4.0).prop_map(|l| IntervalMap1D::logistic(l).unwrap()),
        (1.0f64..=2.0).prop_map(|s| IntervalMap1D::tent(s).unwrap()),
    ]
}

fn sequence_strategy() -> impl Strategy<Value = SymbolSequence> {
    (prop::collection::vec(0u8..2, 0..6), prop::collection::vec(0u8..2, 1..5))
        .prop_map(|(pre, per)| SymbolSequence::new(pre, per).unwrap())
}

/// Random piecewise-linear height field with values in `[0, 1]`.
fn height_strategy() -> impl Strategy<Value = HeightField> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..=1.0), 1..12).prop_map(|mut pts| {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| a.0 == b.0);
        let mut knots = vec![(0.0, 0.0)];
        knots.extend(pts.into_iter().filter(|p| p.0 > 0.0));
        knots.push((1.0, 0.0));
        HeightField {
            depth: 0,
            knots,
            plateaus: Vec::new(),
            zero_anchors: vec![0.0, 1.0],
            core: (0.0, 1.0),
            unresolved: (0.0, 1.0),
        }
    })
}

fn profile_strategy() -> impl Strategy<Value = DistributionalProfile> {
    (1usize..8).prop_flat_map(|h| {
        prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 3), h).prop_map(move |rows| {
            let values = rows
                .into_iter()
                .map(|mut r| {
                    r.sort_by(f64::total_cmp);
                    r
                })
                .collect();
            DistributionalProfile {
                t_grid: vec![0.25, 0.5, 1.0],
                horizons: (1..=h).map(|k| 10 * k).collect(),
                values,
                pair: ("x".into(), "y".into()),
            }
        })
    })
}

/// Upper end of the image of `[0, v]` under `y ↦ h·τ(y)`, from a dense grid plus
/// the tent's peak when it lies in the interval.
fn sampled_image_top(h: f64, v: f64) -> f64 {
    let mut top = 0.0f64;
    for k in 0..=1000 {
        top = top.max(h * tent(v * k as f64 / 1000.0));
    }
    if v >= 0.5 {
        top = top.max(h * tent(0.5));
    }
    top
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_is_a_monotone_fraction(map in map_strategy(), x in 0.0f64..=1.0, y in 0.0f64..=1.0, n in 1usize..400) {
        let grid = default_t_grid();
        let profile = psi_profile(&map, &x, &y, &grid, &[n]).unwrap();
        let row = &profile.values[0];
        prop_assert!(row.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert!(row.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn profile_matches_independent_recount(map in map_strategy(), x in 0.0f64..=1.0, y in 0.0f64..=1.0, n in 1usize..300, t in 0.01f64..=1.0) {
        let profile = psi_profile(&map, &x, &y, &[t], &[n]).unwrap();
        let real = common::real_xi(|z| map.eval(z), x, y, n, t);
        let (ox, oy) = (orbit(&map, &x, n).unwrap(), orbit(&map, &y, n).unwrap());
        prop_assert_eq!(xi_count(&map, &ox, &oy, t).unwrap(), real);
        prop_assert_eq!(profile.values[0][0], real as f64 / n as f64);
        prop_assert_eq!(psi_n(&map, &ox, &oy, t).unwrap(), real as f64 / n as f64);
    }

    #[test]
    fn bounds_are_ordered(map in map_strategy(), x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let grid = default_t_grid();
        let profile = psi_profile(&map, &x, &y, &grid, &[50, 100, 200, 400]).unwrap();
        for &t in &grid {
            for window in [HorizonWindow::UpperHalf, HorizonWindow::All] {
                let b = psi_bounds(&profile, t, window).unwrap();
                prop_assert!(b.lower <= b.upper);
            }
        }
    }

    #[test]
    fn diagonal_pair_has_unit_bounds(map in map_strategy(), x in 0.0f64..=1.0) {
        let grid = default_t_grid();
        let profile = psi_profile(&map, &x, &x, &grid, &[64, 128]).unwrap();
        for &t in &grid {
            let b = psi_bounds(&profile, t, HorizonWindow::All).unwrap();
            prop_assert_eq!((b.lower, b.upper), (1.0, 1.0));
        }
    }

    #[test]
    fn evidence_is_nested(profile in profile_strategy(), delta in 0.01f64..0.49) {
        for window in [HorizonWindow::UpperHalf, HorizonWindow::All] {
            let c = classify_pair(&profile, delta, window).unwrap();
            let e = c.evidence;
            prop_assert!(!e.dc1 || e.dc2);
            prop_assert!(!e.dc2 || e.dc3);
            let expected = if e.dc1 { DcClass::Dc1 } else if e.dc2 { DcClass::Dc2 } else if e.dc3 { DcClass::Dc3 } else { DcClass::None };
            prop_assert_eq!(c.verdict, expected);
        }
    }

    #[test]
    fn orbit_reevaluation_is_bit_exact(map in map_strategy(), x in 0.0f64..=1.0, n in 1usize..500) {
        let a = orbit(&map, &x, n).unwrap();
        let b = orbit(&map, &x, n).unwrap();
        prop_assert!(a.points.iter().zip(&b.points).all(|(p, q)| p.to_bits() == q.to_bits()));
        let mut z = x;
        for (j, p) in a.points.iter().enumerate().skip(1) {
            z = map.step(&z, j).unwrap();
            prop_assert_eq!(p.to_bits(), z.to_bits());
        }
    }

    #[test]
    fn shift_metric_is_an_ultrametric(x in sequence_strategy(), y in sequence_strategy(), z in sequence_strategy()) {
        let d = |a: &SymbolSequence, b: &SymbolSequence| shift_metric(a, b).map_or(0.0, |i| 1.0 / i as f64);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert_eq!(d(&x, &x), 0.0);
        prop_assert!(d(&x, &z) <= d(&x, &y).max(d(&y, &z)));
    }

    #[test]
    fn shift_at_most_doubles_distance(x in sequence_strategy(), y in sequence_strategy()) {
        let d = |a: &SymbolSequence, b: &SymbolSequence| shift_metric(a, b).map_or(0.0, |i| 1.0 / i as f64);
        prop_assert!(d(&shift(&x), &shift(&y)) <= 2.0 * d(&x, &y));
        let sx = shift(&x);
        for i in 1..20u64 {
            prop_assert_eq!(sx.symbol(i), x.symbol(i + 1));
        }
    }

    #[test]
    fn fiber_recursion_matches_sampled_images(
        heights in height_strategy(),
        map in map_strategy(),
        x0 in 0.0f64..=1.0,
        n in 1usize..16,
    ) {
        let spec = TriangularMapSpec::new(map, heights);
        let trace = fiber_range_from(&spec, x0, 1.0, n).unwrap();
        let mut x = x0;
        let mut v = 1.0;
        for j in 0..n {
            v = sampled_image_top(spec.h(x), v);
            x = spec.base.eval(x);
            prop_assert!((trace.values[j + 1] - v).abs() <= 1e-9, "j={} {} vs {}", j + 1, trace.values[j + 1], v);
        }
    }

    #[test]
    fn fiber_map_fixes_the_zero_section(heights in height_strategy(), map in map_strategy(), x in 0.0f64..=1.0) {
        let spec = TriangularMapSpec::new(map, heights);
        prop_assert_eq!(distchaos::kolyada::eval_triangular(&spec, (x, 0.0)).1, 0.0);
    }

    #[test]
    fn fiber_recursion_is_monotone(heights in height_strategy(), x in 0.0f64..=1.0, v in 0.0f64..=1.0, w in 0.0f64..=1.0, n in 1usize..20) {
        let spec = TriangularMapSpec::new(IntervalMap1D::logistic(3.9).unwrap(), heights);
        let (lo, hi) = if v <= w { (v, w) } else { (w, v) };
        prop_assert!(spec.fiber_height(x, lo, n) <= spec.fiber_height(x, hi, n));
    }
}
