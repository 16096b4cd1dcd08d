use std::sync::Arc;

use distchaos::interval::*;
use distchaos::symbolic::{build_dc1_family, parse_word, Radius, ScrambledFamily, SegmentSchedule, ShiftPoint};
use distchaos::Error;

fn halves(h: &Horseshoe) -> bool {
    let mut iv = h.intervals.clone();
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-3;
    iv.len() == 2 && close(iv[0].0, 0.0) && close(iv[0].1, 0.5) && close(iv[1].0, 0.5) && close(iv[1].1, 1.0)
}

#[test]
fn full_maps_have_one_step_horseshoes_on_the_halves() {
    for spec in ["tent:2", "logistic:4"] {
        let f: IntervalMap1D = spec.parse().unwrap();
        let h = find_horseshoe(&f, 4, 1024).unwrap().expect("horseshoe");
        assert_eq!(h.k, 1, "{spec}");
        assert!(h.is_certified());
        assert!(halves(&h), "{spec}: {:?}", h.intervals);
        assert!(h.recheck(&f, 4096) >= -COVER_TOLERANCE);
    }
}

#[test]
fn entropy_bounds() {
    let tent = IntervalMap1D::tent(2.0).unwrap();
    let h = Horseshoe::certify(&tent, 1, vec![(0.0, 0.5), (0.5, 1.0)], 256).unwrap();
    assert_eq!(entropy_lower_bound(&h), 2f64.ln());
    let h2 = Horseshoe::certify(&tent, 2, vec![(0.0, 0.25), (0.25, 0.5)], 256).unwrap();
    assert!(h2.is_certified());
    assert_eq!(entropy_lower_bound(&h2), 2f64.ln() / 2.0);
    let three = IntervalMap1D::piecewise_linear(vec![(0.0, 0.0), (1.0 / 3.0, 1.0), (2.0 / 3.0, 0.0), (1.0, 1.0)]).unwrap();
    let h3 = Horseshoe::certify(&three, 1, vec![(0.0, 1.0 / 3.0), (1.0 / 3.0, 2.0 / 3.0), (2.0 / 3.0, 1.0)], 256).unwrap();
    assert!(h3.is_certified());
    assert_eq!(entropy_lower_bound(&h3), 3f64.ln());
}

#[test]
fn horseshoe_search_rejects_bad_parameters() {
    let f = IntervalMap1D::tent(2.0).unwrap();
    assert!(matches!(find_horseshoe(&f, 0, 1024), Err(Error::Argument(_))));
}

#[test]
fn pullback_points_follow_dyadic_intervals() {
    let f = IntervalMap1D::tent(2.0).unwrap();
    let h = find_horseshoe(&f, 1, 1024).unwrap().unwrap();
    let depth = 8;
    let tree = refine_tree(&f, &h, depth).unwrap();
    let zeros = vec![0u8; depth];
    let s = itinerary_points(&tree, &[zeros]).unwrap();
    let p = &s.points[0];
    // oracle: the all-zero word picks [0, 2^-D] in the tent tree
    let w = 0.5f64.powi(depth as i32);
    assert!((p.width - w).abs() < 1e-12);
    assert!((p.x - w / 2.0).abs() < 1e-12);
    assert!((s.residual_width - w).abs() < 1e-12);

    let a = parse_word("01101100").unwrap();
    let b = parse_word("11101100").unwrap();
    let s = itinerary_points(&tree, &[a, b]).unwrap();
    let (j0, j1) = (tree.interval(&[0]).unwrap(), tree.interval(&[1]).unwrap());
    let gap = (j1.0 - j0.1).max(j0.0 - j1.1).max(0.0);
    let sep = (s.points[0].x - s.points[1].x).abs();
    assert!(sep > gap, "{sep} vs {gap}");
    assert!(itinerary_points(&tree, &[vec![0; depth + 1]]).is_err());
}

#[test]
fn pulled_back_family_is_dc1_for_both_full_maps() {
    for spec in ["tent:2", "logistic:4"] {
        let f: IntervalMap1D = spec.parse().unwrap();
        let h = find_horseshoe(&f, 4, 1024).unwrap().unwrap();
        let tree = Arc::new(refine_tree(&f, &h, 10).unwrap());
        let family = build_dc1_family(4, SegmentSchedule::registered(3).unwrap()).unwrap();
        let alpha: ShiftPoint = "|011".parse().unwrap();
        let r = dc1_point_sample(tree, &alpha, &family, Radius::reciprocal(4).unwrap(), PullbackSettings::default())
            .unwrap();
        assert_eq!(r.certificate.pairs.len(), 6);
        assert!(r.all_pairs_dc1(), "{spec}");
        assert!(r.certificate.pass, "{spec}: {:?}", r.certificate.failed_checks());
    }
}

#[test]
fn identical_words_cannot_form_a_pair() {
    let w = parse_word("0110").unwrap();
    let r = ScrambledFamily::from_parameters(vec![w.clone(), w], SegmentSchedule::registered(3).unwrap());
    assert!(matches!(r, Err(Error::Argument(_))));
}
